#pragma once

#include <functional>
#include <vector>

#include "horolab/sl2.hpp"

// Exact Hecke double-coset machinery over SL(2,Z).
//
// T(l,m) is the double coset Gamma diag(l,m) Gamma with l | m; its left
// coset representatives are exactly the Hermite-form matrices [[a,b],[0,d]]
// with ad = lm, 0 <= b < d, gcd(a,b,d) = l.  T(n) is the union of T(l,m)
// over lm = n, l | m, with sigma_1(n) representatives in total.  For coprime
// p, q the subgroup Gamma_{p/q} = a_{p/q}^{-1} Gamma a_{p/q} \cap Gamma has
// index psi(pq) in Gamma; membership of an integer unimodular matrix is
// q | b and p | c (validated against exact rational conjugation).
//
// All identity testing is exact rational arithmetic; floating point enters
// only at the final Moebius evaluation.

namespace horolab {

long psi_index(long n);  // n * prod_{prime l | n} (1 + 1/l), psi(1) = 1
long sigma1(long n);
long sigma_power(long n, int k);  // sum of d^k over divisors d | n
bool is_squarefree(long n);

struct HeckeSet {
    long l = 1, m = 1;
    std::vector<ExactMatrix> reps;  // upper-triangular integer matrices
};

HeckeSet coset_reps_T(long l, long m);            // requires l | m
std::vector<HeckeSet> coset_reps_Tn(long n);      // all (l,m) with lm = n, l | m
long total_reps_Tn(long n);                       // = sigma1(n)

// Membership in Gamma_{p/q}: exact conjugation a_{p/q} g a_{p/q}^{-1} must be
// integral.  Requires g integral with det 1 and gcd(p,q) = 1.
bool gamma_y_member(const ExactMatrix& g, long p, long q);
// Congruence fast path (q | b and p | c); equals gamma_y_member, which the
// tests validate against the conjugation oracle.
bool gamma_y_member_congruence(const ExactMatrix& g, long p, long q);

struct CosetSystem {
    long p = 1, q = 1;
    std::vector<ExactMatrix> reps;  // the h_m, identity first, BFS order
    long index() const { return static_cast<long>(reps.size()); }
};

// Breadth-first search over right multiplication by S, T, T^{-1}, merging
// cosets through the exact membership test with the mod-(p,q) projective row
// invariant as a complete hash key.  Aborts past 10 * psi(pq) states, which
// would indicate a membership-test bug.
CosetSystem enumerate_gamma_cosets(long p, long q);

// Left-Gamma canonical form of an integral matrix with positive determinant:
// [[a,b],[0,d]] with a,d > 0 and 0 <= b < d.
ExactMatrix hermite_normal_form(const ExactMatrix& m);

enum class CosetIdentity { holds, fails, not_applicable };

// Verifies that { diag(p,q) h_m } is in exact bijection with the
// representatives of T(pq) under left-Gamma equivalence.  The identity
// requires pq squarefree (otherwise T(pq) strictly contains the double
// coset), reported as not_applicable rather than failure.
CosetIdentity double_coset_check(long p, long q);

// (f | Gamma a_{p/q} Gamma)(z) = sum_m f(a_{p/q} h_m . z).
double apply_double_coset(const std::function<double(UHPoint)>& f, const CosetSystem& sys,
                          UHPoint z);
double apply_double_coset(const std::function<double(UHPoint)>& f, long p, long q, UHPoint z);

// T_n f = n^{-1/2} sum over representatives [[a,b],[0,d]] of T(n) of
// f((a z + b)/d).  f must be Gamma-invariant (caller's responsibility).
double hecke_apply(const std::function<double(UHPoint)>& f, long n, UHPoint z);

}  // namespace horolab
