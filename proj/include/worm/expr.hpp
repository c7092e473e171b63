#pragma once

// Field expressions: a small infix language for smooth scalar fields on open
// subsets of C^(n+d).
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | atom ('^' ['-'] int)?
//   atom   := number | 'i' | 'pi' | ident | func '(' args ')' | '(' expr ')'
//
// Reserved identifiers: z1..zn (base coordinates), w1..wd (fiber coordinates),
// and `s` for curve expressions.  Any other identifier is a real parameter bound
// at evaluation time.  Functions: conj re im abs2 exp log_abs2 theta chi, where
// chi(x, a1, b1, a2, b2, M) takes constant parameters.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "worm/jet.hpp"

namespace worm {

enum class NodeKind {
    Coordinate,
    Literal,
    ImagUnit,
    Param,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    PowInt,
    Conj,
    Re,
    Im,
    Abs2,
    Exp,
    LogAbs2,
    Theta,
    Chi,
};

/// Coordinate layout an expression is declared over.  In curve mode the only
/// coordinate is the real loop parameter `s`.
struct Variables {
    int n = 1;
    int d = 0;
    bool curve = false;

    int dim() const noexcept { return curve ? 1 : n + d; }
    bool operator==(const Variables&) const = default;
};

using Bindings = std::map<std::string, double>;

struct Node;

class FieldExpr {
  public:
    FieldExpr() = default;
    FieldExpr(std::shared_ptr<const Node> root, Variables vars)
        : root_(std::move(root)), vars_(vars)
    {}

    const Node& root() const { return *root_; }
    const std::shared_ptr<const Node>& root_ptr() const noexcept { return root_; }
    const Variables& vars() const noexcept { return vars_; }
    bool empty() const noexcept { return !root_; }

    /// True when a fiber coordinate w_j occurs anywhere in the tree.
    bool uses_fiber() const;
    /// Free parameter names, sorted.
    std::set<std::string> params() const;

    bool operator==(const FieldExpr& other) const;

  private:
    std::shared_ptr<const Node> root_;
    Variables vars_;
};

struct Node {
    NodeKind kind = NodeKind::Literal;
    double number = 0.0; ///< Literal
    int exponent = 0;    ///< PowInt
    char family = 'z';   ///< Coordinate: 'z', 'w' or 's'
    int index = 0;       ///< Coordinate, 1-based
    std::string name;    ///< Param
    std::vector<std::shared_ptr<const Node>> children;
};

struct ParseOptions {
    Variables vars;
    /// When set, identifiers outside this set are rejected at parse time.
    std::optional<std::set<std::string>> allowed_params;
};

/// Throws ParseError on malformed input, unknown identifiers, bad arity or
/// out-of-range coordinates.
FieldExpr parse(std::string_view source, const ParseOptions& options);
FieldExpr parse(std::string_view source, Variables vars);

/// Parse and verify the field is real-valued at 32 pseudo-random probe points
/// (fixed seed, tolerance 1e-10).  Throws ConfigError if it is not.
FieldExpr parse_real(std::string_view source, Variables vars, const Bindings& bindings);

/// Probe check used by parse_real; exposed for fields assembled with the builders.
void require_real(const FieldExpr& expr, const Bindings& bindings, std::string_view label);

/// Canonical fully parenthesized text; parse(to_string(e)) == e.
std::string to_string(const FieldExpr& expr);
std::string to_string(const Node& node);

/// Second-order jet of the field at `point` (size vars.n + vars.d, or vars.n for
/// fields without fiber coordinates, or 1 in curve mode).
Jet2 eval_jet(const FieldExpr& expr, const CVec& point, const Bindings& bindings = {});

/// Value only.
cplx eval_value(const FieldExpr& expr, const CVec& point, const Bindings& bindings = {});

/// Real value; throws DomainError if the value has a non-negligible imaginary part.
double eval_real(const FieldExpr& expr, const CVec& point, const Bindings& bindings = {});

// Builders.  Operands must share the same Variables.
namespace fx {

FieldExpr literal(double x, Variables vars);
FieldExpr imag_unit(Variables vars);
FieldExpr param(std::string name, Variables vars);
FieldExpr coord(char family, int index, Variables vars);
FieldExpr unary(NodeKind kind, const FieldExpr& a);
FieldExpr pow(const FieldExpr& a, int p);
FieldExpr chi(const FieldExpr& x, const ChiParams& p);

FieldExpr operator+(const FieldExpr& a, const FieldExpr& b);
FieldExpr operator-(const FieldExpr& a, const FieldExpr& b);
FieldExpr operator*(const FieldExpr& a, const FieldExpr& b);
FieldExpr operator/(const FieldExpr& a, const FieldExpr& b);
FieldExpr operator-(const FieldExpr& a);

/// Same tree re-declared over a wider coordinate layout (e.g. a base field
/// lifted into the total space).  Throws if a coordinate would fall out of range.
FieldExpr relayout(const FieldExpr& a, Variables vars);

} // namespace fx

} // namespace worm
