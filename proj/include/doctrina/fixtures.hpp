#pragma once

#include <cstdint>

#include "doctrina/limits.hpp"
#include "doctrina/report.hpp"

namespace doctrina {

// The worked examples as regression fixtures, on the finite-set probes
// 0, 1, 2, 3. Each records its checks in `report` and throws FixtureMismatch
// naming the first disagreement.

// P with a constant of the empty type, and P with the axiom {} of 1: every
// fiber is a single point.
void powerset_collapse_fixture(const Limits& limits, Report& report);

// P_X(A) = P(X x A) with f(S) = X x S; P_(X,Y)(A) ~ P(Y x A) with f(S) = Y x S
// and reindexing along f : A ~> B sending S to {(x, a) | (x, f(x, a)) in S};
// and P -> P_Y factoring through P_(X,Y) with the inclusion Y -> X as the
// constant. X = {0, 1}, Y = {0}.
void powerset_xy_fixture(const Limits& limits, Report& report);

// collapse followed by X-Y
Report powerset_examples(const Limits& limits = {});

// (LT_T)_phi ~ LT_(T + phi) for phi = T, p and F over atoms p, q.
void lt_axiom_fixture(const Limits& limits, Report& report);

// The two reader comonads for (X, phi) and (Y, psi) on powersets, their
// distributive law and the composite against the reader comonad for X x Y.
void distributive_law_fixture(const Limits& limits, Report& report);

// The universal arrow of a reader comonad factors as the identity, and the
// 2-cells on both sides correspond, on a seeded semilattice doctrine.
void kleisli_roundtrip_fixture(std::uint64_t seed, const Limits& limits, Report& report);

}  // namespace doctrina
