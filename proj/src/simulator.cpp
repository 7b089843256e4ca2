#include "inma/simulator.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace inma {

namespace {

constexpr std::uint32_t kTagInnovation = 0;
constexpr std::uint32_t kTagThinning = 1;

// The simulation core is shared between the unilateral and multilateral
// cases: the coefficient box has effective order (Q1, Q2) = (p1+q1, p2+q2)
// and component (a, b) of the vector at innovation site (s', t') lands in
// cell (s' + a - p1, t' + b - p2).
struct Lattice {
    const BetaMatrix* box;
    int p1;
    int p2;
    const InnovationSpec* innovation;
    CrossDependence crossdep;

    int back1() const { return box->q1() - p1; }  // q1: trailing extent in s
    int back2() const { return box->q2() - p2; }
};

void check_window(int n1, int n2, const SimulateOptions& options) {
    if (n1 < 1 || n2 < 1) {
        throw std::invalid_argument("window dimensions must be positive");
    }
    const std::uint64_t cells = static_cast<std::uint64_t>(n1) * static_cast<std::uint64_t>(n2);
    if (cells > options.max_cells) {
        throw std::length_error("grid of " + std::to_string(cells) +
                                " cells exceeds the configured cap of " +
                                std::to_string(options.max_cells));
    }
}

// Generates output rows [row_lo, row_hi] (1-based, inclusive). Every
// innovation site that can reach those rows is drawn from its own streams,
// so workers recompute at most q1 + p1 halo rows of sites instead of
// synchronizing; writes stay within the assigned row range.
void generate_rows(const Lattice& lat, int n1, int n2, std::uint64_t seed, ThinningPath path,
                   int row_lo, int row_hi, std::vector<std::uint64_t>& values) {
    const int q1 = lat.box->q1();
    const int q2 = lat.box->q2();
    const int m = lat.box->component_count();
    std::vector<std::uint64_t> y(static_cast<std::size_t>(m));

    const int site_row_lo = row_lo - lat.back1();
    const int site_row_hi = row_hi + lat.p1;
    const int site_col_lo = 1 - lat.back2();
    const int site_col_hi = n2 + lat.p2;

    for (int sr = site_row_lo; sr <= site_row_hi; ++sr) {
        for (int sc = site_col_lo; sc <= site_col_hi; ++sc) {
            rng::SiteStream eps_stream(seed, sr, sc, kTagInnovation);
            const std::uint64_t eps = sample_innovation(*lat.innovation, eps_stream);
            if (eps == 0) continue;
            rng::SiteStream thin_stream(seed, sr, sc, kTagThinning);
            sample_thinning_vector_into(*lat.box, lat.crossdep, eps, thin_stream, path, y);
            for (int a = 0; a <= q1; ++a) {
                const int s = sr + a - lat.p1;
                if (s < row_lo || s > row_hi) continue;
                for (int b = 0; b <= q2; ++b) {
                    const int t = sc + b - lat.p2;
                    if (t < 1 || t > n2) continue;
                    values[static_cast<std::size_t>(s - 1) * static_cast<std::size_t>(n2) +
                           static_cast<std::size_t>(t - 1)] +=
                        y[static_cast<std::size_t>(lat.box->flat_index(a, b))];
                }
            }
        }
    }
}

Grid run_simulation(const Lattice& lat, int n1, int n2, std::uint64_t seed,
                    const SimulateOptions& options, std::string mode, std::string hash) {
    check_window(n1, n2, options);

    Grid grid;
    grid.n1 = n1;
    grid.n2 = n2;
    grid.values.assign(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2), 0);
    grid.meta.seed = seed;
    grid.meta.model_hash = std::move(hash);
    grid.meta.mode = std::move(mode);

    const int workers = std::max(1, options.workers);
    if (workers == 1 || n1 == 1) {
        generate_rows(lat, n1, n2, seed, options.path, 1, n1, grid.values);
        return grid;
    }

    const int used = std::min(workers, n1);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(used));
    for (int w = 0; w < used; ++w) {
        const int row_lo = 1 + w * n1 / used;
        const int row_hi = (w + 1) * n1 / used;
        pool.emplace_back([&, row_lo, row_hi] {
            generate_rows(lat, n1, n2, seed, options.path, row_lo, row_hi, grid.values);
        });
    }
    for (auto& th : pool) th.join();
    return grid;
}

}  // namespace

Grid simulate_grid(const InmaModel& model, int n1, int n2, std::uint64_t seed,
                   const SimulateOptions& options) {
    require_valid(model);
    Lattice lat{&model.beta, 0, 0, &model.innovation, model.crossdep};
    return run_simulation(lat, n1, n2, seed, options, "unilateral", model_hash(model));
}

Grid simulate_multilateral(const MultilateralModel& model, int n1, int n2, std::uint64_t seed,
                           const SimulateOptions& options) {
    require_valid(model);
    Lattice lat{&model.box, model.p1, model.p2, &model.innovation, model.crossdep};
    return run_simulation(lat, n1, n2, seed, options, "multilateral", model_hash(model));
}

TracedSimulation simulate_grid_traced(const InmaModel& model, int n1, int n2, std::uint64_t seed,
                                      ThinningPath path) {
    require_valid(model);
    SimulateOptions options;
    options.path = path;
    check_window(n1, n2, options);

    const int q1 = model.beta.q1();
    const int q2 = model.beta.q2();
    const int m = model.beta.component_count();
    const std::size_t site_count =
        static_cast<std::size_t>(n1 + q1) * static_cast<std::size_t>(n2 + q2);

    TracedSimulation out;
    out.grid.n1 = n1;
    out.grid.n2 = n2;
    out.grid.values.assign(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2), 0);
    out.grid.meta.seed = seed;
    out.grid.meta.model_hash = model_hash(model);
    out.y.assign(site_count * static_cast<std::size_t>(m), 0);

    std::size_t block = 0;
    for (int sr = 1 - q1; sr <= n1; ++sr) {
        for (int sc = 1 - q2; sc <= n2; ++sc, ++block) {
            rng::SiteStream eps_stream(seed, sr, sc, kTagInnovation);
            const std::uint64_t eps = sample_innovation(model.innovation, eps_stream);
            rng::SiteStream thin_stream(seed, sr, sc, kTagThinning);
            const std::span<std::uint64_t> y(out.y.data() + block * static_cast<std::size_t>(m),
                                             static_cast<std::size_t>(m));
            sample_thinning_vector_into(model.beta, model.crossdep, eps, thin_stream, path, y);
            for (int a = 0; a <= q1; ++a) {
                const int s = sr + a;
                if (s < 1 || s > n1) continue;
                for (int b = 0; b <= q2; ++b) {
                    const int t = sc + b;
                    if (t < 1 || t > n2) continue;
                    out.grid.values[static_cast<std::size_t>(s - 1) * static_cast<std::size_t>(n2) +
                                    static_cast<std::size_t>(t - 1)] +=
                        y[static_cast<std::size_t>(model.beta.flat_index(a, b))];
                }
            }
        }
    }
    return out;
}

AssemblyMatrix::AssemblyMatrix(int n1, int n2, int q1, int q2) {
    if (n1 < 1 || n2 < 1 || q1 < 0 || q2 < 0) {
        throw std::invalid_argument("assembly matrix requires n1, n2 >= 1 and q1, q2 >= 0");
    }
    block_size_ = (q1 + 1) * (q2 + 1);
    const std::size_t site_cols = static_cast<std::size_t>(n2 + q2);
    cols_ = static_cast<std::size_t>(block_size_) * static_cast<std::size_t>(n1 + q1) * site_cols;

    row_cols_.resize(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2));
    std::size_t r = 0;
    for (int s = 1; s <= n1; ++s) {
        for (int t = 1; t <= n2; ++t, ++r) {
            auto& cols = row_cols_[r];
            cols.reserve(static_cast<std::size_t>(block_size_));
            for (int i = 0; i <= q1; ++i) {
                for (int j = 0; j <= q2; ++j) {
                    // Component (i, j) of the vector at site (s - i, t - j).
                    const std::size_t site =
                        static_cast<std::size_t>(s - i - (1 - q1)) * site_cols +
                        static_cast<std::size_t>(t - j - (1 - q2));
                    cols.push_back(site * static_cast<std::size_t>(block_size_) +
                                   static_cast<std::size_t>(j * (q1 + 1) + i));
                }
            }
            std::sort(cols.begin(), cols.end());
        }
    }
}

std::span<const std::size_t> AssemblyMatrix::row_columns(std::size_t r) const {
    return row_cols_.at(r);
}

int AssemblyMatrix::entry(std::size_t r, std::size_t c) const {
    const auto& cols = row_cols_.at(r);
    return std::binary_search(cols.begin(), cols.end(), c) ? 1 : 0;
}

AssemblyMatrix build_assembly_matrix(int n1, int n2, int q1, int q2) {
    return AssemblyMatrix(n1, n2, q1, q2);
}

std::vector<std::uint64_t> assemble_from_y(const AssemblyMatrix& b,
                                           std::span<const std::uint64_t> y) {
    if (y.size() != b.cols()) {
        throw std::invalid_argument("thinning vector length " + std::to_string(y.size()) +
                                    " does not match assembly matrix columns " +
                                    std::to_string(b.cols()));
    }
    std::vector<std::uint64_t> x(b.rows(), 0);
    for (std::size_t r = 0; r < b.rows(); ++r) {
        std::uint64_t acc = 0;
        for (std::size_t c : b.row_columns(r)) acc += y[c];
        x[r] = acc;
    }
    return x;
}

}  // namespace inma
