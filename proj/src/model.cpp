#include "inma/model.hpp"

#include <cstdint>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace inma {

MultilateralModel::MultilateralModel(int p1_, int p2_, int q1, int q2,
                                     const std::vector<double>& entries_row_major,
                                     InnovationSpec innovation_, CrossDependence crossdep_)
    : p1(p1_),
      p2(p2_),
      box(p1_ + q1, p2_ + q2, entries_row_major),
      innovation(std::move(innovation_)),
      crossdep(crossdep_) {
    if (p1 < 0 || p2 < 0 || q1 < 0 || q2 < 0) {
        throw std::invalid_argument("multilateral order components must be nonnegative");
    }
}

namespace {

void check_beta_entries(const BetaMatrix& beta, std::vector<std::string>& violations) {
    for (int i = 0; i <= beta.q1(); ++i) {
        for (int j = 0; j <= beta.q2(); ++j) {
            const double b = beta.at(i, j);
            if (!(b >= 0.0 && b <= 1.0)) {
                std::ostringstream msg;
                msg << "beta[" << i << "][" << j << "] = " << b << " outside [0, 1]";
                violations.push_back(msg.str());
            }
        }
    }
}

void check_innovation(const InnovationSpec& spec, std::vector<std::string>& violations) {
    try {
        validate_innovation(spec);
    } catch (const std::invalid_argument& e) {
        violations.emplace_back(e.what());
    }
}

void check_spread(const BetaMatrix& beta, CrossDependence crossdep,
                  std::vector<std::string>& violations) {
    if (crossdep == CrossDependence::kSpread && beta.beta_dot() > 1.0 + 1e-12) {
        std::ostringstream msg;
        msg << "spread model requires the beta sum <= 1, got " << beta.beta_dot();
        violations.push_back(msg.str());
    }
}

class Fnv1a64 {
public:
    void feed(const void* data, std::size_t size) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t k = 0; k < size; ++k) {
            hash_ ^= bytes[k];
            hash_ *= 0x100000001B3ull;
        }
    }
    void feed_double(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        feed(&bits, sizeof(bits));
    }
    void feed_int(std::int64_t v) { feed(&v, sizeof(v)); }
    void feed_str(const std::string& s) { feed(s.data(), s.size()); }

    std::string hex() const {
        std::ostringstream out;
        out << std::hex;
        out.width(16);
        out.fill('0');
        out << hash_;
        return out.str();
    }

private:
    std::uint64_t hash_ = 0xCBF29CE484222325ull;
};

void feed_innovation(Fnv1a64& h, const InnovationSpec& spec) {
    h.feed_str(innovation_name(spec));
    if (const auto* p = std::get_if<Poisson>(&spec)) {
        h.feed_double(p->mu);
    } else if (const auto* nb = std::get_if<NegBin>(&spec)) {
        h.feed_double(nb->n);
        h.feed_double(nb->pi);
    } else {
        h.feed_int(static_cast<std::int64_t>(std::get<Deterministic>(spec).c));
    }
}

void feed_box(Fnv1a64& h, const BetaMatrix& beta) {
    h.feed_int(beta.q1());
    h.feed_int(beta.q2());
    for (double b : beta.flat()) h.feed_double(b);
}

void throw_if_invalid(const std::vector<std::string>& violations) {
    if (violations.empty()) return;
    std::string joined = "invalid model:";
    for (const auto& v : violations) joined += "\n  - " + v;
    throw std::invalid_argument(joined);
}

}  // namespace

std::vector<std::string> validate_model(const InmaModel& model) {
    std::vector<std::string> violations;
    if (model.beta.q1() + model.beta.q2() < 1) {
        violations.emplace_back("order (q1, q2) with q1 + q2 >= 1 required");
    }
    check_beta_entries(model.beta, violations);
    check_innovation(model.innovation, violations);
    check_spread(model.beta, model.crossdep, violations);
    return violations;
}

std::vector<std::string> validate_model(const MultilateralModel& model) {
    std::vector<std::string> violations;
    if (model.box.q1() + model.box.q2() < 1) {
        violations.emplace_back("multilateral order with p1+q1+p2+q2 >= 1 required");
    }
    check_beta_entries(model.box, violations);
    check_innovation(model.innovation, violations);
    check_spread(model.box, model.crossdep, violations);
    return violations;
}

void require_valid(const InmaModel& model) { throw_if_invalid(validate_model(model)); }

void require_valid(const MultilateralModel& model) { throw_if_invalid(validate_model(model)); }

std::string model_hash(const InmaModel& model) {
    Fnv1a64 h;
    h.feed_str("unilateral");
    feed_box(h, model.beta);
    feed_innovation(h, model.innovation);
    h.feed_str(cross_dependence_name(model.crossdep));
    return h.hex();
}

std::string model_hash(const MultilateralModel& model) {
    Fnv1a64 h;
    h.feed_str("multilateral");
    h.feed_int(model.p1);
    h.feed_int(model.p2);
    feed_box(h, model.box);
    feed_innovation(h, model.innovation);
    h.feed_str(cross_dependence_name(model.crossdep));
    return h.hex();
}

}  // namespace inma
