#include "worm/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <utility>

#include "worm/error.hpp"

namespace worm {

namespace {

using NodePtr = std::shared_ptr<const Node>;

struct FunctionInfo {
    NodeKind kind;
    int arity;
};

const std::map<std::string, FunctionInfo, std::less<>>& functions()
{
    static const std::map<std::string, FunctionInfo, std::less<>> table = {
        {"conj", {NodeKind::Conj, 1}},       {"re", {NodeKind::Re, 1}},
        {"im", {NodeKind::Im, 1}},           {"abs2", {NodeKind::Abs2, 1}},
        {"exp", {NodeKind::Exp, 1}},         {"log_abs2", {NodeKind::LogAbs2, 1}},
        {"theta", {NodeKind::Theta, 1}},     {"chi", {NodeKind::Chi, 6}},
    };
    return table;
}

const char* function_name(NodeKind kind)
{
    switch (kind) {
    case NodeKind::Conj: return "conj";
    case NodeKind::Re: return "re";
    case NodeKind::Im: return "im";
    case NodeKind::Abs2: return "abs2";
    case NodeKind::Exp: return "exp";
    case NodeKind::LogAbs2: return "log_abs2";
    case NodeKind::Theta: return "theta";
    case NodeKind::Chi: return "chi";
    default: return nullptr;
    }
}

NodePtr make_node(NodeKind kind, std::vector<NodePtr> children = {})
{
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->children = std::move(children);
    return n;
}

NodePtr make_literal(double x)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Literal;
    n->number = x;
    return n;
}

bool nodes_equal(const Node& a, const Node& b)
{
    if (a.kind != b.kind || a.children.size() != b.children.size())
        return false;
    switch (a.kind) {
    case NodeKind::Literal:
        if (a.number != b.number)
            return false;
        break;
    case NodeKind::PowInt:
        if (a.exponent != b.exponent)
            return false;
        break;
    case NodeKind::Coordinate:
        if (a.family != b.family || a.index != b.index)
            return false;
        break;
    case NodeKind::Param:
        if (a.name != b.name)
            return false;
        break;
    default: break;
    }
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!nodes_equal(*a.children[i], *b.children[i]))
            return false;
    return true;
}

bool any_node(const Node& n, const std::function<bool(const Node&)>& pred)
{
    if (pred(n))
        return true;
    for (const auto& c : n.children)
        if (any_node(*c, pred))
            return true;
    return false;
}

void collect_params(const Node& n, std::set<std::string>& out)
{
    if (n.kind == NodeKind::Param)
        out.insert(n.name);
    for (const auto& c : n.children)
        collect_params(*c, out);
}

std::string format_number(double x)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void print(const Node& n, std::string& out)
{
    auto binary = [&](const char* op) {
        out += '(';
        print(*n.children[0], out);
        out += op;
        print(*n.children[1], out);
        out += ')';
    };
    switch (n.kind) {
    case NodeKind::Literal: out += format_number(n.number); break;
    case NodeKind::ImagUnit: out += 'i'; break;
    case NodeKind::Param: out += n.name; break;
    case NodeKind::Coordinate:
        out += n.family;
        if (n.family != 's')
            out += std::to_string(n.index);
        break;
    case NodeKind::Add: binary(" + "); break;
    case NodeKind::Sub: binary(" - "); break;
    case NodeKind::Mul: binary(" * "); break;
    case NodeKind::Div: binary(" / "); break;
    case NodeKind::Neg:
        out += "(-";
        print(*n.children[0], out);
        out += ')';
        break;
    case NodeKind::PowInt:
        out += '(';
        print(*n.children[0], out);
        out += '^';
        out += std::to_string(n.exponent);
        out += ')';
        break;
    default: {
        out += function_name(n.kind);
        out += '(';
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (i)
                out += ", ";
            print(*n.children[i], out);
        }
        out += ')';
    }
    }
}

// ---------------------------------------------------------------------------
// Lexer / parser

enum class Tok { Number, Ident, Op, End };

struct Token {
    Tok type = Tok::End;
    std::string text;
    double number = 0.0;
    std::size_t pos = 0;
};

class Parser {
  public:
    Parser(std::string_view src, const ParseOptions& opt) : src_(src), opt_(opt) { advance(); }

    NodePtr parse_all()
    {
        NodePtr e = expr();
        if (tok_.type != Tok::End)
            throw ParseError("unexpected '" + tok_.text + "'", tok_.pos);
        return e;
    }

  private:
    std::string_view src_;
    const ParseOptions& opt_;
    std::size_t at_ = 0;
    Token tok_;

    void advance()
    {
        while (at_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[at_])))
            ++at_;
        tok_ = Token{};
        tok_.pos = at_;
        if (at_ >= src_.size()) {
            tok_.type = Tok::End;
            tok_.text = "end of input";
            return;
        }
        const char c = src_[at_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t j = at_;
            while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j])))
                ++j;
            if (j < src_.size() && src_[j] == '.') {
                ++j;
                while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j])))
                    ++j;
            }
            if (j < src_.size() && (src_[j] == 'e' || src_[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src_.size() && (src_[k] == '+' || src_[k] == '-'))
                    ++k;
                if (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
                    while (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k])))
                        ++k;
                    j = k;
                }
            }
            tok_.type = Tok::Number;
            tok_.text = std::string(src_.substr(at_, j - at_));
            // from_chars rejects a leading '+' only, which cannot occur here.
            auto res = std::from_chars(tok_.text.data(), tok_.text.data() + tok_.text.size(),
                                       tok_.number);
            if (res.ec != std::errc() || res.ptr != tok_.text.data() + tok_.text.size())
                throw ParseError("malformed number '" + tok_.text + "'", at_);
            at_ = j;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = at_;
            while (j < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
                ++j;
            tok_.type = Tok::Ident;
            tok_.text = std::string(src_.substr(at_, j - at_));
            at_ = j;
            return;
        }
        if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
            tok_.type = Tok::Op;
            tok_.text = std::string(1, c);
            ++at_;
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", at_);
    }

    bool is_op(char c) const { return tok_.type == Tok::Op && tok_.text[0] == c; }

    void expect(char c)
    {
        if (!is_op(c))
            throw ParseError(std::string("expected '") + c + "' but found '" + tok_.text + "'",
                             tok_.pos);
        advance();
    }

    NodePtr expr()
    {
        NodePtr lhs = term();
        while (is_op('+') || is_op('-')) {
            const NodeKind k = is_op('+') ? NodeKind::Add : NodeKind::Sub;
            advance();
            lhs = make_node(k, {lhs, term()});
        }
        return lhs;
    }

    NodePtr term()
    {
        NodePtr lhs = factor();
        while (is_op('*') || is_op('/')) {
            const NodeKind k = is_op('*') ? NodeKind::Mul : NodeKind::Div;
            advance();
            lhs = make_node(k, {lhs, factor()});
        }
        return lhs;
    }

    NodePtr factor()
    {
        if (is_op('-')) {
            advance();
            return make_node(NodeKind::Neg, {factor()});
        }
        NodePtr base = atom();
        if (is_op('^')) {
            advance();
            bool negative = false;
            if (is_op('-')) {
                negative = true;
                advance();
            }
            if (tok_.type != Tok::Number || tok_.text.find_first_not_of("0123456789") != std::string::npos)
                throw ParseError("exponent must be an integer literal", tok_.pos);
            int p = 0;
            auto res = std::from_chars(tok_.text.data(), tok_.text.data() + tok_.text.size(), p);
            if (res.ec != std::errc())
                throw ParseError("exponent out of range", tok_.pos);
            advance();
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::PowInt;
            n->exponent = negative ? -p : p;
            n->children = {base};
            return n;
        }
        return base;
    }

    NodePtr atom()
    {
        const Token t = tok_;
        if (t.type == Tok::Number) {
            advance();
            return make_literal(t.number);
        }
        if (is_op('(')) {
            advance();
            NodePtr e = expr();
            expect(')');
            return e;
        }
        if (t.type != Tok::Ident)
            throw ParseError("unexpected '" + t.text + "'", t.pos);
        advance();

        if (auto f = functions().find(t.text); f != functions().end()) {
            if (!is_op('('))
                throw ParseError("function '" + t.text + "' requires an argument list", tok_.pos);
            advance();
            std::vector<NodePtr> args;
            if (!is_op(')')) {
                args.push_back(expr());
                while (is_op(',')) {
                    advance();
                    args.push_back(expr());
                }
            }
            const std::size_t close_pos = tok_.pos;
            expect(')');
            if (static_cast<int>(args.size()) != f->second.arity)
                throw ParseError("function '" + t.text + "' expects " +
                                     std::to_string(f->second.arity) + " argument(s), got " +
                                     std::to_string(args.size()),
                                 close_pos);
            if (f->second.kind == NodeKind::Chi)
                check_literal_chi(args, t.pos);
            return make_node(f->second.kind, std::move(args));
        }
        if (t.text == "i")
            return make_node(NodeKind::ImagUnit);
        if (t.text == "pi")
            return make_literal(std::numbers::pi);
        if (auto coord = coordinate(t))
            return coord;
        if (opt_.allowed_params && !opt_.allowed_params->contains(t.text))
            throw ParseError("unknown identifier '" + t.text + "'", t.pos);
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Param;
        n->name = t.text;
        return n;
    }

    static void check_literal_chi(const std::vector<NodePtr>& args, std::size_t pos)
    {
        double p[5];
        for (int k = 0; k < 5; ++k) {
            const Node* a = args[k + 1].get();
            double sign = 1.0;
            if (a->kind == NodeKind::Neg) {
                sign = -1.0;
                a = a->children[0].get();
            }
            if (a->kind != NodeKind::Literal)
                return;
            p[k] = sign * a->number;
        }
        try {
            ChiParams{p[0], p[1], p[2], p[3], p[4]}.validate();
        } catch (const ConfigError& e) {
            throw ParseError(e.what(), pos);
        }
    }

    NodePtr coordinate(const Token& t)
    {
        const Variables& v = opt_.vars;
        if (t.text == "s") {
            if (!v.curve)
                throw ParseError("'s' is only available in a loop expression", t.pos);
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::Coordinate;
            n->family = 's';
            n->index = 1;
            return n;
        }
        const char fam = t.text[0];
        if ((fam != 'z' && fam != 'w') || t.text.size() < 2 ||
            t.text.find_first_not_of("0123456789", 1) != std::string::npos)
            return nullptr;
        if (v.curve)
            throw ParseError("coordinate '" + t.text + "' is not available in a curve expression",
                             t.pos);
        int idx = 0;
        std::from_chars(t.text.data() + 1, t.text.data() + t.text.size(), idx);
        const int limit = fam == 'z' ? v.n : v.d;
        if (idx < 1 || idx > limit)
            throw ParseError("coordinate '" + t.text + "' out of range (" + fam + "1.." + fam +
                                 std::to_string(limit) + ")",
                             t.pos);
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Coordinate;
        n->family = fam;
        n->index = idx;
        return n;
    }
};

// ---------------------------------------------------------------------------
// Evaluation

struct EvalContext {
    const CVec& point;
    const Bindings& bindings;
    const Variables& vars;
};

int coordinate_slot(const Node& n, const EvalContext& ctx)
{
    int slot = 0;
    switch (n.family) {
    case 's': slot = 0; break;
    case 'z': slot = n.index - 1; break;
    default: slot = ctx.vars.n + n.index - 1; break;
    }
    if (slot >= ctx.point.size())
        throw DomainError("coordinate not available at a point of dimension " +
                              std::to_string(ctx.point.size()),
                          to_string(n));
    return slot;
}

double lookup(const Node& n, const EvalContext& ctx)
{
    auto it = ctx.bindings.find(n.name);
    if (it == ctx.bindings.end())
        throw ConfigError("unbound parameter '" + n.name + "'");
    return it->second;
}

cplx value_of(const Node& n, const EvalContext& ctx);

ChiParams chi_params(const Node& n, const EvalContext& ctx)
{
    double p[5];
    for (int k = 0; k < 5; ++k) {
        const cplx v = value_of(*n.children[k + 1], ctx);
        if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v)))
            throw DomainError("chi parameter is not real", to_string(n));
        p[k] = v.real();
    }
    ChiParams cp{p[0], p[1], p[2], p[3], p[4]};
    cp.validate();
    return cp;
}

double real_argument(cplx v, const Node& n)
{
    if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v)))
        throw DomainError("real function applied to a complex-valued argument", to_string(n));
    return v.real();
}

template <typename F>
auto annotate(const Node& n, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const DomainError& e) {
        if (!e.subexpression().empty())
            throw;
        throw DomainError(e.what(), to_string(n));
    }
}

cplx value_of(const Node& n, const EvalContext& ctx)
{
    auto arg = [&](int k) { return value_of(*n.children[k], ctx); };
    switch (n.kind) {
    case NodeKind::Coordinate: return ctx.point[coordinate_slot(n, ctx)];
    case NodeKind::Literal: return n.number;
    case NodeKind::ImagUnit: return {0.0, 1.0};
    case NodeKind::Param: return lookup(n, ctx);
    case NodeKind::Add: return arg(0) + arg(1);
    case NodeKind::Sub: return arg(0) - arg(1);
    case NodeKind::Mul: return arg(0) * arg(1);
    case NodeKind::Div: {
        const cplx den = arg(1);
        if (den == cplx(0.0, 0.0))
            throw DomainError("division by zero", to_string(n));
        return arg(0) / den;
    }
    case NodeKind::Neg: return -arg(0);
    case NodeKind::PowInt: {
        const cplx b = arg(0);
        if (n.exponent < 0 && b == cplx(0.0, 0.0))
            throw DomainError("negative power of zero", to_string(n));
        return n.exponent == 0 ? cplx(1.0) : std::pow(b, n.exponent);
    }
    case NodeKind::Conj: return std::conj(arg(0));
    case NodeKind::Re: return arg(0).real();
    case NodeKind::Im: return arg(0).imag();
    case NodeKind::Abs2: return std::norm(arg(0));
    case NodeKind::Exp: return std::exp(arg(0));
    case NodeKind::LogAbs2: {
        const double a = std::norm(arg(0));
        if (!(a > 0.0))
            throw DomainError("log_abs2 of zero", to_string(n));
        return std::log(a);
    }
    case NodeKind::Theta: return theta(real_argument(arg(0), n)).value;
    case NodeKind::Chi: return chi(real_argument(arg(0), n), chi_params(n, ctx)).value;
    }
    return {};
}

Jet2 jet_of(const Node& n, const EvalContext& ctx)
{
    const int m = static_cast<int>(ctx.point.size());
    auto arg = [&](int k) { return jet_of(*n.children[k], ctx); };
    switch (n.kind) {
    case NodeKind::Coordinate: return Jet2::coordinate(coordinate_slot(n, ctx) + 1, ctx.point);
    case NodeKind::Literal: return Jet2::constant(n.number, m);
    case NodeKind::ImagUnit: return Jet2::constant({0.0, 1.0}, m);
    case NodeKind::Param: return Jet2::constant(lookup(n, ctx), m);
    case NodeKind::Add: return arg(0) + arg(1);
    case NodeKind::Sub: return arg(0) - arg(1);
    case NodeKind::Mul: return arg(0) * arg(1);
    case NodeKind::Div: {
        const Jet2 num = arg(0);
        const Jet2 den = arg(1);
        return annotate(n, [&] { return num * recip(den); });
    }
    case NodeKind::Neg: return -arg(0);
    case NodeKind::PowInt: {
        const Jet2 b = arg(0);
        return annotate(n, [&] { return pow_int(b, n.exponent); });
    }
    case NodeKind::Conj: return conj(arg(0));
    case NodeKind::Re: return re(arg(0));
    case NodeKind::Im: return im(arg(0));
    case NodeKind::Abs2: return abs2(arg(0));
    case NodeKind::Exp: return exp_c(arg(0));
    case NodeKind::LogAbs2: {
        const Jet2 a = arg(0);
        return annotate(n, [&] { return log_abs2(a); });
    }
    case NodeKind::Theta: {
        const Jet2 a = arg(0);
        const double x = real_argument(a.value, n);
        return annotate(n, [&] { return compose_real(a, theta(x)); });
    }
    case NodeKind::Chi: {
        const Jet2 a = arg(0);
        const double x = real_argument(a.value, n);
        const ChiParams p = chi_params(n, ctx);
        return annotate(n, [&] { return compose_real(a, chi(x, p)); });
    }
    }
    return Jet2(m);
}

void check_point(const FieldExpr& e, const CVec& point)
{
    if (e.empty())
        throw Error("evaluation of an empty field expression");
    const Variables& v = e.vars();
    const auto size = point.size();
    const bool ok = v.curve ? size == 1 : (size == v.n + v.d || (size == v.n && !e.uses_fiber()));
    if (!ok)
        throw DomainError("point of dimension " + std::to_string(size) +
                              " does not match the field's coordinates",
                          to_string(e));
}

bool is_constant(const Node& n)
{
    return !any_node(n, [](const Node& x) {
        return x.kind == NodeKind::Coordinate || x.kind == NodeKind::Param;
    });
}

void validate_constant_chi(const Node& n, const Variables& vars)
{
    if (n.kind == NodeKind::Chi) {
        bool constant = true;
        for (std::size_t k = 1; k < n.children.size(); ++k)
            constant = constant && is_constant(*n.children[k]);
        if (constant) {
            const CVec origin = CVec::Zero(vars.dim());
            const Bindings none;
            chi_params(n, EvalContext{origin, none, vars});
        }
    }
    for (const auto& c : n.children)
        validate_constant_chi(*c, vars);
}

Variables common_vars(const FieldExpr& a, const FieldExpr& b)
{
    if (!(a.vars() == b.vars()))
        throw Error("field expressions declared over different coordinates");
    return a.vars();
}

} // namespace

// ---------------------------------------------------------------------------

bool FieldExpr::uses_fiber() const
{
    return root_ && any_node(*root_, [](const Node& x) {
               return x.kind == NodeKind::Coordinate && x.family == 'w';
           });
}

std::set<std::string> FieldExpr::params() const
{
    std::set<std::string> out;
    if (root_)
        collect_params(*root_, out);
    return out;
}

bool FieldExpr::operator==(const FieldExpr& other) const
{
    if (!root_ || !other.root_)
        return !root_ && !other.root_;
    return vars_ == other.vars_ && nodes_equal(*root_, *other.root_);
}

FieldExpr parse(std::string_view source, const ParseOptions& options)
{
    Parser p(source, options);
    NodePtr root = p.parse_all();
    validate_constant_chi(*root, options.vars);
    return FieldExpr(std::move(root), options.vars);
}

FieldExpr parse(std::string_view source, Variables vars)
{
    return parse(source, ParseOptions{vars, std::nullopt});
}

void require_real(const FieldExpr& expr, const Bindings& bindings, std::string_view label)
{
    std::mt19937_64 rng(0x5eedf1e1d5ULL);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    const int m = expr.vars().dim();
    int probed = 0;
    for (int k = 0; k < 32; ++k) {
        CVec p(m);
        for (int j = 0; j < m; ++j) {
            const double re_part = coord(rng);
            const double im_part = expr.vars().curve ? 0.0 : coord(rng);
            p[j] = cplx(re_part, im_part);
        }
        Jet2 j;
        try {
            j = eval_jet(expr, p, bindings);
        } catch (const DomainError&) {
            continue;
        }
        ++probed;
        if (!j.is_real(1e-10))
            throw ConfigError("field '" + std::string(label) + "' = " + to_string(expr) +
                              " is not real-valued");
    }
    if (probed == 0)
        throw ConfigError("field '" + std::string(label) + "' could not be evaluated at any probe point");
}

FieldExpr parse_real(std::string_view source, Variables vars, const Bindings& bindings)
{
    FieldExpr e = parse(source, vars);
    require_real(e, bindings, source);
    return e;
}

std::string to_string(const Node& node)
{
    std::string out;
    print(node, out);
    return out;
}

std::string to_string(const FieldExpr& expr)
{
    return expr.empty() ? std::string() : to_string(expr.root());
}

Jet2 eval_jet(const FieldExpr& expr, const CVec& point, const Bindings& bindings)
{
    check_point(expr, point);
    return jet_of(expr.root(), EvalContext{point, bindings, expr.vars()});
}

cplx eval_value(const FieldExpr& expr, const CVec& point, const Bindings& bindings)
{
    check_point(expr, point);
    return value_of(expr.root(), EvalContext{point, bindings, expr.vars()});
}

double eval_real(const FieldExpr& expr, const CVec& point, const Bindings& bindings)
{
    const cplx v = eval_value(expr, point, bindings);
    return real_argument(v, expr.root());
}

namespace fx {

FieldExpr literal(double x, Variables vars)
{
    return FieldExpr(make_literal(x), vars);
}

FieldExpr imag_unit(Variables vars)
{
    return FieldExpr(make_node(NodeKind::ImagUnit), vars);
}

FieldExpr param(std::string name, Variables vars)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Param;
    n->name = std::move(name);
    return FieldExpr(n, vars);
}

FieldExpr coord(char family, int index, Variables vars)
{
    const int limit = family == 'z' ? vars.n : family == 'w' ? vars.d : 1;
    if (index < 1 || index > limit)
        throw Error(std::string("coordinate ") + family + std::to_string(index) + " out of range");
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Coordinate;
    n->family = family;
    n->index = index;
    return FieldExpr(n, vars);
}

FieldExpr unary(NodeKind kind, const FieldExpr& a)
{
    if (kind != NodeKind::Neg && (!function_name(kind) || kind == NodeKind::Chi))
        throw Error("not a unary node kind");
    return FieldExpr(make_node(kind, {a.root_ptr()}), a.vars());
}

FieldExpr pow(const FieldExpr& a, int p)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::PowInt;
    n->exponent = p;
    n->children = {a.root_ptr()};
    return FieldExpr(n, a.vars());
}

FieldExpr chi(const FieldExpr& x, const ChiParams& p)
{
    p.validate();
    std::vector<NodePtr> args{x.root_ptr()};
    for (double v : {p.a1, p.b1, p.a2, p.b2, p.M})
        args.push_back(v < 0.0 ? make_node(NodeKind::Neg, {make_literal(-v)}) : make_literal(v));
    return FieldExpr(make_node(NodeKind::Chi, std::move(args)), x.vars());
}

FieldExpr operator+(const FieldExpr& a, const FieldExpr& b)
{
    return FieldExpr(make_node(NodeKind::Add, {a.root_ptr(), b.root_ptr()}), common_vars(a, b));
}

FieldExpr operator-(const FieldExpr& a, const FieldExpr& b)
{
    return FieldExpr(make_node(NodeKind::Sub, {a.root_ptr(), b.root_ptr()}), common_vars(a, b));
}

FieldExpr operator*(const FieldExpr& a, const FieldExpr& b)
{
    return FieldExpr(make_node(NodeKind::Mul, {a.root_ptr(), b.root_ptr()}), common_vars(a, b));
}

FieldExpr operator/(const FieldExpr& a, const FieldExpr& b)
{
    return FieldExpr(make_node(NodeKind::Div, {a.root_ptr(), b.root_ptr()}), common_vars(a, b));
}

FieldExpr operator-(const FieldExpr& a)
{
    return FieldExpr(make_node(NodeKind::Neg, {a.root_ptr()}), a.vars());
}

FieldExpr relayout(const FieldExpr& a, Variables vars)
{
    if (vars.curve != a.vars().curve)
        throw Error("cannot relayout between curve and coordinate expressions");
    const bool fits = !any_node(a.root(), [&](const Node& x) {
        if (x.kind != NodeKind::Coordinate)
            return false;
        return (x.family == 'z' && x.index > vars.n) || (x.family == 'w' && x.index > vars.d);
    });
    if (!fits)
        throw Error("expression '" + to_string(a) + "' does not fit the target coordinates");
    return FieldExpr(a.root_ptr(), vars);
}

} // namespace fx

} // namespace worm
