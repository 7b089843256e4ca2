#pragma once

#include <string>
#include <vector>

#include "inma/distributions.hpp"
#include "inma/thinning.hpp"

namespace inma {

/// Full specification of a unilateral moving-average count field: every cell
/// sums thinned copies of the innovations in its trailing order box.
struct InmaModel {
    BetaMatrix beta;
    InnovationSpec innovation;
    CrossDependence crossdep;
};

/// Two-sided variant: the coefficient box spans offsets i in [-p1, q1],
/// j in [-p2, q2], so a cell may also draw on "later" innovations. Stored
/// over the shifted effective box of order (p1+q1, p2+q2); the entry for
/// offset (i, j) sits at box position (i + p1, j + p2).
struct MultilateralModel {
    int p1 = 0;
    int p2 = 0;
    BetaMatrix box;
    InnovationSpec innovation;
    CrossDependence crossdep;

    /// entries_row_major covers i = -p1..q1 (rows) by j = -p2..q2 (columns).
    MultilateralModel(int p1_, int p2_, int q1, int q2,
                      const std::vector<double>& entries_row_major,
                      InnovationSpec innovation_, CrossDependence crossdep_);

    int q1() const { return box.q1() - p1; }
    int q2() const { return box.q2() - p2; }
};

/// Every violated invariant as a human-readable message; empty means ok.
std::vector<std::string> validate_model(const InmaModel& model);
std::vector<std::string> validate_model(const MultilateralModel& model);

/// Throws std::invalid_argument listing all violations, if any.
void require_valid(const InmaModel& model);
void require_valid(const MultilateralModel& model);

/// Canonical content hash over order, coefficients (bit-exact), innovation
/// and cross-dependence choice. Recorded in grid metadata so outputs can be
/// traced back to the exact model that produced them.
std::string model_hash(const InmaModel& model);
std::string model_hash(const MultilateralModel& model);

}  // namespace inma
