#pragma once

// Closed-form and brute-force reference computations, kept separate from the
// production code paths they cross-check.

#include <array>

#include "scalrig/linalg.hpp"

namespace scalrig::oracle {

/// Gram matrix of the bilinear form induced by `a` on 2-vectors, in the basis
/// e_i ^ e_j (i < j): entries a_ik a_jl - a_il a_jk.
Matrix lambda2_gram(const Matrix& a);

/// sqrt of the largest eigenvalue of the induced pencil on 2-vectors.
double norm2_brute_force(const Matrix& a, const Matrix& b);

/// Ricci eigenvalues of a diagonal left-invariant metric diag(d1, d2, d3) on the
/// unimodular algebra [e2,e3] = l1 e1, [e3,e1] = l2 e2, [e1,e2] = l3 e3, by
/// Milnor's formula in the rescaled orthonormal frame. Unsorted, indexed by axis.
std::array<double, 3> milnor_ricci(std::array<double, 3> l, std::array<double, 3> diag);

/// The closed Ricci formulas for the Berger metric diag(1, p, q) on su(2),
/// indexed by axis, and its scalar curvature.
std::array<double, 3> berger_ricci(double p, double q);
double berger_scalar(double p, double q);

/// |Ric°|^2 of the canonical variations, in the expanded and in the collected form.
double hopf_traceless_norm_sq(int n, double t);
double hopf_traceless_norm_sq_collected(int n, double t);
double cp_traceless_norm_sq(int n, double t);
double cp_traceless_norm_sq_collected(int n, double t);

}  // namespace scalrig::oracle
