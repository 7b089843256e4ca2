#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "inma/model.hpp"
#include "inma/oracle.hpp"

namespace inma {

/// One self-describing run: model, window and seed, and the analysis knobs.
/// Stored as JSON with nested sections; beta is given row-major together
/// with the explicit order so dimension mismatches are hard errors.
struct RunConfig {
    // model block
    int q1 = 0;
    int q2 = 0;
    int p1 = 0;  // leading extents; nonzero makes the model multilateral
    int p2 = 0;
    std::vector<std::vector<double>> beta_rows;
    InnovationSpec innovation = Poisson{1.0};
    CrossDependence crossdep = CrossDependence::kIndependence;

    // run block
    int n1 = 100;
    int n2 = 100;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string output_dir = ".";

    // analysis block
    int lag_box_k = 2;
    int lag_box_l = 2;
    std::vector<double> u_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    double z_threshold = 4.0;
    int replications = 1;
    int bootstrap_resamples = 300;

    // oracle block
    double oracle_mass_bound = 1e-10;
    std::uint64_t oracle_state_limit = 50'000'000;

    bool multilateral() const { return p1 > 0 || p2 > 0; }

    InmaModel build_model() const;
    MultilateralModel build_multilateral_model() const;

    std::string to_json() const;
    static RunConfig from_json_text(const std::string& text);
    static RunConfig load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
};

}  // namespace inma
