#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "inma/model.hpp"

namespace inma {

struct GridMetadata {
    std::uint64_t seed = 0;
    std::string model_hash;
    std::string mode = "unilateral";  // or "multilateral"
    // Output is a pure function of (seed, model, n1, n2); worker count and
    // scheduling never affect it.
    bool thread_count_independent = true;
};

/// Rectangular window of counts, cell (s, t) with 1 <= s <= n1, 1 <= t <= n2,
/// stored raster (s slow, t fast).
struct Grid {
    int n1 = 0;
    int n2 = 0;
    std::vector<std::uint64_t> values;
    GridMetadata meta;

    std::uint64_t at(int s, int t) const {
        return values[static_cast<std::size_t>(s - 1) * static_cast<std::size_t>(n2) +
                      static_cast<std::size_t>(t - 1)];
    }
    std::size_t cell_count() const { return values.size(); }
};

struct SimulateOptions {
    int workers = 1;
    std::uint64_t max_cells = std::uint64_t{1} << 31;  // fail fast on typo'd sizes
    ThinningPath path = ThinningPath::kCompound;
};

/// Draws the window in three steps: innovations on the extended lattice
/// (rows 1-q1 .. n1, columns 1-q2 .. n2), one thinning vector per innovation,
/// then scatter-add of each vector's components into its receiving cells;
/// contributions landing outside the window are discarded. Each innovation
/// site owns dedicated random streams keyed by its absolute coordinates, so
/// the result is independent of worker count and of the window size.
Grid simulate_grid(const InmaModel& model, int n1, int n2, std::uint64_t seed,
                   const SimulateOptions& options = {});

/// Two-sided variant; innovations live on rows 1-q1 .. n1+p1 and columns
/// 1-q2 .. n2+p2. With p1 = p2 = 0 the output is identical to simulate_grid.
Grid simulate_multilateral(const MultilateralModel& model, int n1, int n2, std::uint64_t seed,
                           const SimulateOptions& options = {});

/// A simulation together with every thinning vector it consumed,
/// concatenated in assembly order (innovation sites raster, components in
/// flat order within each site block). Single-threaded; intended for exact
/// cross-checks of the linear-assembly representation on small windows.
struct TracedSimulation {
    Grid grid;
    std::vector<std::uint64_t> y;
};

TracedSimulation simulate_grid_traced(const InmaModel& model, int n1, int n2, std::uint64_t seed,
                                      ThinningPath path = ThinningPath::kCompound);

/// 0/1 matrix B with X = B * Y: row (s, t) selects, for every offset (i, j)
/// in the order box, component (i, j) of the thinning vector belonging to
/// innovation site (s - i, t - j). Rows are window cells in raster order;
/// columns are blocks of (q1+1)(q2+1) components per innovation site, sites
/// in raster order starting at (1-q1, 1-q2), component (i, j) at
/// block-internal position j*(q1+1)+i.
class AssemblyMatrix {
public:
    AssemblyMatrix(int n1, int n2, int q1, int q2);

    std::size_t rows() const { return row_cols_.size(); }
    std::size_t cols() const { return cols_; }
    int ones_per_row() const { return block_size_; }

    /// Column indices of the ones in row r, ascending.
    std::span<const std::size_t> row_columns(std::size_t r) const;

    int entry(std::size_t r, std::size_t c) const;

private:
    std::size_t cols_;
    int block_size_;
    std::vector<std::vector<std::size_t>> row_cols_;
};

AssemblyMatrix build_assembly_matrix(int n1, int n2, int q1, int q2);

/// Integer matrix-vector product B * y.
std::vector<std::uint64_t> assemble_from_y(const AssemblyMatrix& b,
                                           std::span<const std::uint64_t> y);

}  // namespace inma
