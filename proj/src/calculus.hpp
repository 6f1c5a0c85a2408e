#pragma once
#include "composition.hpp"
#include "expression.hpp"

namespace tc {

// Finite-dimensional algebra carried as matrices in a fixed orthonormal basis.
// mult is n x n^2 (acting on a Kronecker pair), comult its Hermitian adjoint.
struct AlgebraSpec {
  int n = 1;
  Mat mult;              // n x n^2
  Mat comult;            // n^2 x n
  CVec unit;             // length n
  Mat trace_functional;  // 1 x n
  std::map<std::string, CVec> elements;  // edge ("u->v") -> fibre vector

  const CVec& element_for(const Edge& e) const;  // defaults to unit
};

// Full matrix algebra M_k, vectorized column-major (fibre dimension k^2).
AlgebraSpec matrix_algebra(int k);
// Componentwise product on C^n (diagonal matrices).
AlgebraSpec diagonal_algebra(int n);
// Diagonal C^2 with standard basis elements e0/e1 available; the qubit fibre.
AlgebraSpec qubit_algebra();

// Checks mult associativity and comult = mult^dagger; throws InterfaceMismatch.
void validate_algebra(const AlgebraSpec& alg);

struct EvalResult {
  Mat matrix;
  Eigen::Index domain_dim = 1, codomain_dim = 1;
};

// Product over slots of (blue -> n, green -> 1).
Eigen::Index eval_object(const Boundary& b, const AlgebraSpec& alg);

// Top-left embedding with zero padding; throws ShrinkNotAllowed.
Mat iota_embed(const Mat& m, Eigen::Index rows, Eigen::Index cols);

// Permutation with kron_swap(p,q) * (a (x) b) = b (x) a for dim-p a, dim-q b.
Mat kron_swap(Eigen::Index p, Eigen::Index q);

// Per-edge value: same-colour copies -> identity; blue->blue -> transport;
// green->blue -> transport * element; blue->green -> trace * transport;
// green->green -> 1x1 identity.
Mat eval_edge(const Edge& e, const TransportGraph& tg, const ConnectionSpec& conn,
              const AlgebraSpec& alg);

// Substitute matrices for the letters of the normalized expression of
// tg.graph: compose = product, tensor = Kronecker, fan-in through mult,
// fan-out through comult, twist through the swap permutation.
EvalResult eval_graph(const TransportGraph& tg, const ConnectionSpec& conn,
                      const AlgebraSpec& alg);
// Uses tg.conn, or the zero connection when unset.
EvalResult eval_graph(const TransportGraph& tg, const AlgebraSpec& alg);

// Summand evaluations padded to the declared arities (identity wires on
// trailing slots, zero-fill for any leftover dimension) and summed; an empty
// sum is the zero matrix.
EvalResult eval_multitangle(const Multitangle& mt, const AlgebraSpec& alg);

// Family t |-> eval under gauge_path(t) acting on the connection, sampled on
// an even grid over [0,1]; gauge_path(0) must be the identity.
std::vector<EvalResult> eval_2morphism_family(
    const TransportGraph& tg, const ConnectionSpec& conn,
    const std::function<GaugeMap(double)>& gauge_path, int samples,
    const AlgebraSpec& alg);

}  // namespace tc
