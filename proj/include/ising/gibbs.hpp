#pragma once

#include <vector>

#include "ising/boundary.hpp"
#include "ising/enumerate.hpp"
#include "ising/lattice.hpp"
#include "ising/spins.hpp"
#include "ising/transfer.hpp"

namespace ising {

enum class Engine { Enumeration, TransferMatrix };

// Exact finite-volume Gibbs measure mu^omega_{Lambda;beta}.
struct MeasureOracle {
    BoundaryCondition bc;
    double beta = 0.0;
    Engine engine = Engine::Enumeration;

    const Rect& rect() const { return bc.rect(); }
};

// Picks Enumeration when the box has at most 24 spins, else TransferMatrix.
MeasureOracle make_oracle(const BoundaryCondition& bc, double beta);

double log_partition_function(const MeasureOracle& o);
// exp(log Z); may overflow to inf for large boxes.
double partition_function(const MeasureOracle& o);
double expectation(const MeasureOracle& o, const LocalFunction& f);
// <f> by transfer matrix with an explicit width limit.
double expectation_transfer(const BoundaryCondition& bc, double beta, const LocalFunction& f, int width_cap);

// Compares <f>^omega on the outer box with the DLR re-average over the ring
// outer \ inner of the inner-box expectations <f>^eta. Returns the absolute
// discrepancy between the two computations.
double dlr_check(const MeasureOracle& outer, const Rect& inner, const LocalFunction& f);

// log Z of a width x length rectangle (width rows) by transfer matrix; the
// boundary condition may be any condition on that rectangle.
double strip_partition(int width, int length, double beta, const BoundaryCondition& bc);

struct ReferenceValue {
    double value = 0.0;
    double error = 0.0;
    int n_used = 0;
};

// <f>^+ in the pure phase, from <f>^+_{Lambda_n} with increasing n: exact
// (transfer matrix, n <= 5) while increments shrink, falling back to a
// sampled plus-box estimate at n_max when exact sizes do not converge.
ReferenceValue pure_phase_reference(double beta, const LocalFunction& f, int n_max, double tol = 1e-10);

// Self-dual point: tanh(beta) = exp(-2 beta).
double self_dual_beta();

}  // namespace ising
