#pragma once

// JSON instance files:
//   {"m", "n", "k", "dist": {"type": ..., params...}, "seed",
//    "A": row-major array, "b": array, "x_true": array}
// Doubles are written as shortest round-trip decimals.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rwl1/distributions.hpp"
#include "rwl1/errors.hpp"
#include "rwl1/instance.hpp"

namespace rwl1 {

inline nlohmann::json distribution_to_json(const DistributionSpec& d) {
    nlohmann::json j;
    j["type"] = distribution_name(d);
    std::visit(
        [&j](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, dist::Normal>) {
                j["mu"] = v.mu;
                j["sigma"] = v.sigma;
            } else if constexpr (std::is_same_v<T, dist::Poisson>) {
                j["lambda"] = v.lambda;
            } else if constexpr (std::is_same_v<T, dist::Exponential>) {
                j["mean"] = v.mean;
            } else if constexpr (std::is_same_v<T, dist::FDist>) {
                j["alpha"] = v.alpha;
                j["beta"] = v.beta;
            } else if constexpr (std::is_same_v<T, dist::Gamma>) {
                j["shape"] = v.shape;
                j["scale"] = v.scale;
            } else {
                j["N"] = v.upper;
            }
        },
        d);
    return j;
}

namespace detail {

template <class T>
T json_field(const nlohmann::json& obj, const char* key, const std::string& context) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ParseError(context + ": missing field '" + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(context + ": field '" + key + "' has the wrong type (" + e.what() + ")");
    }
}

inline std::vector<double> json_reals(const nlohmann::json& obj, const char* key,
                                      std::size_t expected) {
    const auto values = json_field<std::vector<double>>(obj, key, "instance");
    if (values.size() != expected) {
        throw ParseError("instance: field '" + std::string(key) + "' has length " +
                         std::to_string(values.size()) + ", expected " + std::to_string(expected));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw ParseError("instance: field '" + std::string(key) + "' entry " +
                             std::to_string(i) + " is not finite");
        }
    }
    return values;
}

} // namespace detail

inline DistributionSpec distribution_from_json(const nlohmann::json& j) {
    const auto type = detail::json_field<std::string>(j, "type", "dist");
    DistributionSpec d;
    if (type == "normal") {
        d = dist::Normal{detail::json_field<double>(j, "mu", "dist"),
                         detail::json_field<double>(j, "sigma", "dist")};
    } else if (type == "poisson") {
        d = dist::Poisson{detail::json_field<double>(j, "lambda", "dist")};
    } else if (type == "exponential") {
        d = dist::Exponential{detail::json_field<double>(j, "mean", "dist")};
    } else if (type == "f") {
        d = dist::FDist{detail::json_field<int>(j, "alpha", "dist"),
                        detail::json_field<int>(j, "beta", "dist")};
    } else if (type == "gamma") {
        d = dist::Gamma{detail::json_field<double>(j, "shape", "dist"),
                        detail::json_field<double>(j, "scale", "dist")};
    } else if (type == "uniform") {
        d = dist::Uniform{detail::json_field<double>(j, "N", "dist")};
    } else {
        throw ParseError("dist: unknown type '" + type + "'");
    }
    try {
        validate(d);
    } catch (const InputError& e) {
        throw ParseError(std::string("dist: ") + e.what());
    }
    return d;
}

inline nlohmann::json instance_to_json(const ProblemInstance& inst) {
    nlohmann::json j;
    j["m"] = inst.m();
    j["n"] = inst.n();
    j["k"] = inst.k;
    j["dist"] = distribution_to_json(inst.dist);
    j["seed"] = inst.seed;
    j["A"] = std::vector<double>(inst.a.values().begin(), inst.a.values().end());
    j["b"] = inst.b.vector();
    j["x_true"] = inst.x_true.vector();
    return j;
}

inline ProblemInstance instance_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("instance: top level must be a JSON object");
    ProblemInstance inst;
    const auto m = detail::json_field<std::size_t>(j, "m", "instance");
    const auto n = detail::json_field<std::size_t>(j, "n", "instance");
    if (m == 0 || n == 0 || m > n) {
        throw ParseError("instance: need 0 < m <= n, got m=" + std::to_string(m) +
                         ", n=" + std::to_string(n));
    }
    inst.k = detail::json_field<std::size_t>(j, "k", "instance");
    if (!j.contains("dist")) throw ParseError("instance: missing field 'dist'");
    inst.dist = distribution_from_json(j.at("dist"));
    inst.seed = detail::json_field<std::uint64_t>(j, "seed", "instance");
    inst.a = DenseMatrix(m, n, detail::json_reals(j, "A", m * n));
    inst.b = DenseVector(detail::json_reals(j, "b", m));
    inst.x_true = DenseVector(detail::json_reals(j, "x_true", n));

    const auto nnz = static_cast<std::size_t>(std::count_if(
        inst.x_true.begin(), inst.x_true.end(), [](double v) { return v != 0.0; }));
    if (nnz != inst.k) {
        throw ParseError("instance: x_true has " + std::to_string(nnz) +
                         " nonzeros but k = " + std::to_string(inst.k));
    }
    const double scale = std::max(1.0, norm_inf(inst.b.values()));
    if (residual_inf(inst.a, inst.x_true, inst.b) > 1e-9 * scale) {
        throw ParseError("instance: b does not equal A·x_true");
    }
    return inst;
}

inline void save_instance(const ProblemInstance& inst, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
    out << instance_to_json(inst).dump() << '\n';
    if (!out) throw InputError("failed writing '" + path.string() + "'");
}

inline ProblemInstance parse_instance(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("instance: malformed JSON: ") + e.what());
    }
    return instance_from_json(j);
}

inline ProblemInstance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_instance(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

} // namespace rwl1
