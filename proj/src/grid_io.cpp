#include "inma/grid_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace inma {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace

void save_grid_csv(const Grid& grid, const std::filesystem::path& csv_path) {
    auto out = open_out(csv_path);
    for (int s = 1; s <= grid.n1; ++s) {
        for (int t = 1; t <= grid.n2; ++t) {
            if (t > 1) out << ',';
            out << grid.at(s, t);
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("failed writing " + csv_path.string());
}

void save_grid_metadata(const Grid& grid, const std::filesystem::path& meta_path) {
    nlohmann::json meta;
    meta["seed"] = grid.meta.seed;
    meta["model_hash"] = grid.meta.model_hash;
    meta["mode"] = grid.meta.mode;
    meta["n1"] = grid.n1;
    meta["n2"] = grid.n2;
    meta["thread_count_independent"] = grid.meta.thread_count_independent;
    auto out = open_out(meta_path);
    out << meta.dump(2) << '\n';
}

Grid load_grid(const std::filesystem::path& csv_path, const std::filesystem::path& meta_path) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open " + csv_path.string());

    Grid grid;
    std::string line;
    int cols = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        int count = 0;
        while (std::getline(row, cell, ',')) {
            grid.values.push_back(std::stoull(cell));
            ++count;
        }
        if (cols == -1) {
            cols = count;
        } else if (count != cols) {
            throw std::runtime_error("ragged CSV row in " + csv_path.string());
        }
        ++grid.n1;
    }
    if (grid.n1 == 0 || cols <= 0) throw std::runtime_error("empty grid file " + csv_path.string());
    grid.n2 = cols;

    if (!meta_path.empty()) {
        std::ifstream meta_in(meta_path);
        if (!meta_in) throw std::runtime_error("cannot open " + meta_path.string());
        nlohmann::json meta = nlohmann::json::parse(meta_in);
        grid.meta.seed = meta.at("seed").get<std::uint64_t>();
        grid.meta.model_hash = meta.at("model_hash").get<std::string>();
        grid.meta.mode = meta.value("mode", "unilateral");
        grid.meta.thread_count_independent = meta.value("thread_count_independent", true);
        if (meta.at("n1").get<int>() != grid.n1 || meta.at("n2").get<int>() != grid.n2) {
            throw std::runtime_error("metadata dimensions disagree with CSV contents");
        }
    }
    return grid;
}

}  // namespace inma
