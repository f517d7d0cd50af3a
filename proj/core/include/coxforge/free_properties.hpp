#pragma once

#include "coxforge/diagram.hpp"
#include "coxforge/geometry.hpp"
#include "coxforge/verdict.hpp"

namespace coxforge {

// Types other than t that are non-adjacent to t in the diagram (bond 2).
// Incidence with vertices of these types is forced by property F.
std::vector<int> non_adjacent_types(const CoxeterDiagram& d, int t);

// The types outside {i,j} adjacent to i or to j: the flag type set over
// which property P quantifies for the bond {i,j}. Sorted.
std::vector<int> p_context(const CoxeterDiagram& d, int i, int j);

// Property F: vertices of distinct non-adjacent types are always incident.
// Witness on failure: the offending vertex pair and their types.
CheckResult check_F(const Geometry& g, const CoxeterDiagram& d);

// Property P: for every adjacent pair {i,j} and every flag X of type exactly
// p_context(i,j), the {i,j}-restriction of the residue of X has girth
// >= 2 m_{i,j} (acyclic when the bond is infinite). Witness: bond, flag,
// girth found and a shortest cycle.
CheckResult check_P(const Geometry& g, const CoxeterDiagram& d);

// Property D: for every pair with bond >= 4 the full two-type restriction
// has girth >= 6. Witness: bond and a 4-cycle.
CheckResult check_D(const Geometry& g, const CoxeterDiagram& d);

// F, P, D in order; first failure wins.
CheckResult check_fpd(const Geometry& g, const CoxeterDiagram& d);

}  // namespace coxforge
