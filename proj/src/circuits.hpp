#pragma once
#include "calculus.hpp"

namespace tc {

// A gate as a tangle: single-qubit gates are one-summand cylinder tangles;
// controlled gates are two-summand multitangles built from projector wires.
struct Gate {
  std::string name;
  Mat unitary;  // 2^arity x 2^arity
  std::size_t arity = 1;
  Multitangle tangle;
};

// X, Y, Z, H, S, T cylinders plus CNOT and CZ (P0 (x) I + P1 (x) U).
const std::map<std::string, Gate>& standard_gates();

struct GateApp {
  std::string gate;
  std::vector<int> wires;  // ascending, contiguous
};

struct Circuit {
  int qubits = 0;
  std::vector<std::vector<GateApp>> layers;
};

struct Register {
  std::vector<int> kets;  // 0/1 per qubit
  Multitangle tangle;     // one summand: disjoint union of element graphs
};

Register make_register(const std::vector<int>& kets);

// Bilinear parallel product: summands are pairwise disjoint unions.
Multitangle tensor_multitangles(const Multitangle& a, const Multitangle& b);

// One circuit layer as a multitangle over all `qubits` wires (identity
// cylinders on untouched wires); throws on overlapping or unknown gates.
Multitangle layer_multitangle(const Circuit& c, std::size_t layer);
// All layers composed (without a register).
Multitangle circuit_multitangle(const Circuit& c);

// Evaluates the register, then each layer in order; returns the state vector.
CVec apply_circuit(const Circuit& c, const Register& r);

// Pair-of-pants product of two single-blue-target tangles (constant paths on
// the pants): under a matrix algebra it multiplies the underlying elements.
TransportGraph wedge(const TransportGraph& a, const TransportGraph& b);

// Element graph over M_2: a cup whose transport turns the unit into vec(a).
TransportGraph element_tangle(const Mat& a, const std::string& tag);

// Gate connections are constant matrices scaled by a plateau profile that
// vanishes near the chart's x-edges, so circuit tangles glue without collars.
ConnectionSpec profiled_banded(const std::vector<Mat>& cx, Rect chart);
double profile_mass();       // integral of the profile over a unit chart
double profile_half_mass();  // integral over the left half

}  // namespace tc
