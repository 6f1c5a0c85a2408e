#pragma once
#include <functional>
#include <memory>

#include "reduction.hpp"

namespace tc {

struct EndPoint {
  std::string label;
  Color color = Color::blue;
  bool operator==(const EndPoint&) const = default;
};

// Cobordism-expression tree. Compose layers are stored in application order
// (first applied first); the pretty-printer shows the outermost layer first.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { gen, id, compose, tensor, mult, comult, twist };
  Kind kind;
  EndPoint src, dst;                 // gen/id endpoints
  std::optional<Edge> orig_edge;     // original edge carried by a generator
  std::vector<ExprPtr> children;
};

ExprPtr mk_gen(EndPoint s, EndPoint d, std::optional<Edge> orig = std::nullopt);
ExprPtr mk_id(EndPoint p);
ExprPtr mk_compose(std::vector<ExprPtr> layers);  // first applied first
ExprPtr mk_tensor(std::vector<ExprPtr> factors);
ExprPtr mk_mult(ExprPtr l, ExprPtr r);
ExprPtr mk_comult(ExprPtr l, ExprPtr r);
ExprPtr mk_twist(ExprPtr l, ExprPtr r);

// Step-9 extraction: one layer per level gap (plus explicit wire-swap layers
// when the induced orders force a permutation).
ExprPtr extract_expr(const ReducedGraph& r);

// Equivalence up to insertion/contraction of identity edges and unit layers.
bool exprs_equivalent(const ExprPtr& a, const ExprPtr& b);

std::string pretty(const ExprPtr& e);  // ∘ ⊗ ∧ ∨ ⊠ notation

// Evaluation callbacks. compose(later, earlier) means "later after earlier".
template <class P>
struct Semantics {
  std::function<P(const Expr&)> leaf;       // gen and id nodes
  std::function<P()> unit;                  // empty tensor (scalar 1)
  std::function<P(P, P)> compose;
  std::function<P(P, P)> tensor;
  std::function<P(P, P)> mult;
  std::function<P(P, P)> comult;
  std::function<P(P, P)> twist;
};

template <class P>
P substitute(const ExprPtr& e, const Semantics<P>& sem) {
  if (!e) throw err("MissingAssignment", "null expression");
  switch (e->kind) {
    case Expr::Kind::gen:
    case Expr::Kind::id:
      return sem.leaf(*e);
    case Expr::Kind::compose: {
      if (e->children.empty()) return sem.unit();
      P acc = substitute(e->children.front(), sem);
      for (std::size_t i = 1; i < e->children.size(); ++i)
        acc = sem.compose(substitute(e->children[i], sem), std::move(acc));
      return acc;
    }
    case Expr::Kind::tensor: {
      if (e->children.empty()) return sem.unit();
      P acc = substitute(e->children.front(), sem);
      for (std::size_t i = 1; i < e->children.size(); ++i)
        acc = sem.tensor(std::move(acc), substitute(e->children[i], sem));
      return acc;
    }
    case Expr::Kind::mult:
      return sem.mult(substitute(e->children[0], sem), substitute(e->children[1], sem));
    case Expr::Kind::comult:
      return sem.comult(substitute(e->children[0], sem), substitute(e->children[1], sem));
    case Expr::Kind::twist:
      return sem.twist(substitute(e->children[0], sem), substitute(e->children[1], sem));
  }
  throw err("MissingAssignment", "unknown expression node");
}

}  // namespace tc
