#include "tsengflow/cli/config.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace tsengflow::cli {
namespace {

using nlohmann::json;

// Typed access to one JSON object; remembers its pointer for messages and
// rejects keys that nothing asked for.
class Section {
public:
    Section(const json& node, std::string pointer) : node_(node), pointer_(std::move(pointer)) {
        if (!node_.is_object()) fail("", "expected an object");
    }

    /// Call once every known key has been read.
    void finish() const {
        for (const auto& [key, value] : node_.items()) {
            if (!seen_.count(key)) fail(key, "unknown key");
        }
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return node_.contains(key);
    }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const json& v = node_.at(key);
        if (!v.is_number()) fail(key, "expected a number");
        return v.get<double>();
    }

    std::optional<double> optional_number(const std::string& key) {
        if (!has(key) || node_.at(key).is_null()) return std::nullopt;
        return number(key, 0.0);
    }

    long integer(const std::string& key, long fallback) {
        if (!has(key)) return fallback;
        const json& v = node_.at(key);
        if (!v.is_number_integer()) fail(key, "expected an integer");
        return v.get<long>();
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = node_.at(key);
        if (!v.is_boolean()) fail(key, "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const json& v = node_.at(key);
        if (!v.is_string()) fail(key, "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key) {
        const json& v = node_.at(key);
        if (!v.is_array()) fail(key, "expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) fail(key, "expected an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    const json& child(const std::string& key) {
        seen_.insert(key);
        return node_.at(key);
    }

    std::string pointer(const std::string& key) const { return pointer_ + "/" + key; }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw ConfigError(fmt::format("config error at {}: {}", key.empty() ? pointer_ : pointer(key), what));
    }

private:
    const json& node_;
    std::string pointer_;
    std::set<std::string> seen_;
};

int positive_int(Section& s, const std::string& key, long fallback) {
    const long v = s.integer(key, fallback);
    if (v < 1 || v > 1'000'000'000) s.fail(key, "expected a positive integer");
    return static_cast<int>(v);
}

ProblemConfig parse_problem(const json& node) {
    Section s(node, "/problem");
    ProblemConfig c;
    c.kind = s.string("kind", c.kind);
    if (c.kind == "interval_toy") {
        c.lo = s.number("lo", c.lo);
        c.hi = s.number("hi", c.hi);
        if (c.lo > c.hi) s.fail("lo", "lo must not exceed hi");
    } else if (c.kind == "linear_1d") {
        c.slope = s.number("slope", c.slope);
        c.shift = s.number("shift", c.shift);
        if (c.slope < 0.0) s.fail("slope", "slope must be >= 0");
    } else if (c.kind == "saddle") {
        c.saddle.n1 = positive_int(s, "n1", c.saddle.n1);
        c.saddle.n2 = positive_int(s, "n2", c.saddle.n2);
        c.saddle.d = positive_int(s, "d", c.saddle.d);
        c.saddle.g = s.number("g", c.saddle.g);
        c.saddle.f = s.number("f", c.saddle.f);
        c.saddle.box_lo = s.number("box_lo", c.saddle.box_lo);
        c.saddle.box_hi = s.number("box_hi", c.saddle.box_hi);
        c.saddle.seed = static_cast<std::uint64_t>(s.integer("seed", static_cast<long>(c.saddle.seed)));
        if (!(c.saddle.g > 0.0) || !(c.saddle.f > 0.0)) s.fail("g", "g and f must be positive");
        if (!(c.saddle.box_lo < c.saddle.box_hi)) s.fail("box_lo", "box_lo must be below box_hi");
    } else if (c.kind == "gnep") {
        c.gnep.num_players = positive_int(s, "players", c.gnep.num_players);
        if (s.has("dims")) {
            c.gnep.dims.clear();
            for (double v : s.numbers("dims")) {
                if (v < 1 || v != static_cast<int>(v)) s.fail("dims", "player dimensions must be positive integers");
                c.gnep.dims.push_back(static_cast<int>(v));
            }
        } else {
            c.gnep.dims.assign(static_cast<std::size_t>(c.gnep.num_players), 2);
        }
        if (c.gnep.dims.size() != static_cast<std::size_t>(c.gnep.num_players)) {
            s.fail("dims", "need one dimension per player");
        }
        c.gnep.d = positive_int(s, "d", c.gnep.d);
        c.gnep.box_lo = s.number("box_lo", c.gnep.box_lo);
        c.gnep.box_hi = s.number("box_hi", c.gnep.box_hi);
        c.gnep.coupling_scale = s.number("coupling_scale", c.gnep.coupling_scale);
        c.gnep.seed = static_cast<std::uint64_t>(s.integer("seed", static_cast<long>(c.gnep.seed)));
        if (!(c.gnep.box_lo < c.gnep.box_hi)) s.fail("box_lo", "box_lo must be below box_hi");
    } else {
        s.fail("kind", fmt::format("unknown problem kind '{}' (interval_toy, linear_1d, saddle, gnep)", c.kind));
    }
    s.finish();
    return c;
}

ScheduleConfig parse_schedule(const json& node) {
    Section s(node, "/schedule");
    ScheduleConfig c;
    c.kind = s.string("kind", c.kind);
    if (c.kind == "power_law") {
        c.power_law.b = s.number("b", c.power_law.b);
        c.power_law.q = s.number("q", c.power_law.q);
        c.power_law.r = s.number("r", c.power_law.r);
        c.power_law.sigma = s.number("sigma", c.power_law.sigma);
        if (!(c.power_law.b > 0.0)) s.fail("b", "must be positive");
        if (!(c.power_law.q > 0.0)) s.fail("q", "must be positive");
        if (!(c.power_law.r > 0.0)) s.fail("r", "must be positive");
        if (!(c.power_law.sigma > 0.0 && c.power_law.sigma < 1.0)) s.fail("sigma", "must lie in (0, 1)");
    } else if (c.kind == "constant") {
        c.eps = s.number("eps", c.eps);
        c.beta = s.number("beta", c.beta);
        c.lambda = s.optional_number("lambda");
        c.sigma = s.number("sigma", c.sigma);
        if (!(c.eps > 0.0) || !(c.beta > 0.0)) s.fail("eps", "eps and beta must be positive");
        if (c.lambda && !(*c.lambda > 0.0)) s.fail("lambda", "must be positive");
        if (!(c.sigma > 0.0 && c.sigma < 1.0)) s.fail("sigma", "must lie in (0, 1)");
    } else if (c.kind == "custom") {
        c.sigma = s.number("sigma", c.sigma);
        if (!(c.sigma > 0.0 && c.sigma < 1.0)) s.fail("sigma", "must lie in (0, 1)");
        if (!s.has("table")) s.fail("table", "custom schedule needs a table of [t, eps, beta] rows");
        const json& table = s.child("table");
        if (!table.is_array() || table.empty()) s.fail("table", "expected a nonempty array");
        for (std::size_t i = 0; i < table.size(); ++i) {
            const json& row = table[i];
            if (!row.is_array() || row.size() != 3 || !row[0].is_number() || !row[1].is_number() ||
                !row[2].is_number()) {
                throw ConfigError(fmt::format("config error at /schedule/table/{}: expected [t, eps, beta]", i));
            }
            const ScheduleKnot knot{row[0].get<double>(), row[1].get<double>(), row[2].get<double>()};
            if (!(knot.eps > 0.0) || !(knot.beta > 0.0)) {
                throw ConfigError(fmt::format("config error at /schedule/table/{}: eps and beta must be positive", i));
            }
            if (!c.table.empty() && !(knot.t > c.table.back().t)) {
                throw ConfigError(fmt::format("config error at /schedule/table/{}: times must increase", i));
            }
            c.table.push_back(knot);
        }
    } else {
        s.fail("kind", fmt::format("unknown schedule kind '{}' (power_law, constant, custom)", c.kind));
    }
    s.finish();
    return c;
}

IntegratorSettings parse_integrator(const json& node) {
    Section s(node, "/integrator");
    IntegratorSettings c;
    const std::string method = s.string("method", to_string(c.method));
    if (method != "euler" && method != "rk4") s.fail("method", "expected \"euler\" or \"rk4\"");
    c.method = method_from_string(method);
    c.t_end = s.number("t_end", c.t_end);
    c.step = s.number("step", c.step);
    c.record_stride = positive_int(s, "record_stride", c.record_stride);
    if (!(c.t_end > 0.0)) s.fail("t_end", "must be positive");
    if (!(c.step > 0.0 && c.step < c.t_end)) s.fail("step", "must satisfy 0 < step < t_end");
    if (s.has("initial_point")) {
        const json& v = s.child("initial_point");
        if (v.is_number()) {
            c.initial_fill = v.get<double>();
        } else {
            c.initial_point = s.numbers("initial_point");
        }
    }
    s.finish();
    return c;
}

OracleSettings parse_oracle(const json& node) {
    Section s(node, "/oracle");
    OracleSettings c;
    c.attach_oracle_distance = s.boolean("attach_oracle_distance", c.attach_oracle_distance);
    c.verify_prop1 = s.boolean("verify_prop1", c.verify_prop1);
    c.verify_prop2 = s.boolean("verify_prop2", c.verify_prop2);
    c.tol = s.number("tol", c.tol);
    c.rho = s.number("rho", c.rho);
    c.n_max = positive_int(s, "n_max", c.n_max);
    c.decay_target = s.number("decay_target", c.decay_target);
    c.pairs = static_cast<int>(s.integer("pairs", c.pairs));
    c.seed = static_cast<std::uint64_t>(s.integer("seed", static_cast<long>(c.seed)));
    c.eps_lo = s.number("eps_lo", c.eps_lo);
    c.eps_hi = s.number("eps_hi", c.eps_hi);
    c.beta_lo = s.number("beta_lo", c.beta_lo);
    c.beta_hi = s.number("beta_hi", c.beta_hi);
    if (!(c.tol > 0.0)) s.fail("tol", "must be positive");
    if (!(c.rho > 0.0 && c.rho < 1.0)) s.fail("rho", "must lie in (0, 1)");
    if (c.pairs < 0) s.fail("pairs", "must be >= 0");
    if (!(c.eps_lo > 0.0 && c.eps_lo <= c.eps_hi)) s.fail("eps_lo", "need 0 < eps_lo <= eps_hi");
    if (!(c.beta_lo >= 0.0 && c.beta_lo <= c.beta_hi)) s.fail("beta_lo", "need 0 <= beta_lo <= beta_hi");
    s.finish();
    return c;
}

ValidationSettings parse_validation(const json& node) {
    Section s(node, "/validation");
    ValidationSettings c;
    c.horizon = s.number("horizon", c.horizon);
    c.grid = positive_int(s, "grid", c.grid);
    if (!(c.horizon > 0.0)) s.fail("horizon", "must be positive");
    if (c.grid < 2) s.fail("grid", "must be >= 2");
    s.finish();
    return c;
}

SweepSettings parse_sweep(const json& node) {
    Section s(node, "/sweep");
    SweepSettings c;
    c.q_max = s.number("q_max", c.q_max);
    c.r_max = s.number("r_max", c.r_max);
    c.n_q = positive_int(s, "n_q", c.n_q);
    c.n_r = positive_int(s, "n_r", c.n_r);
    if (!(c.q_max > 0.0) || !(c.r_max > 0.0)) s.fail("q_max", "grid bounds must be positive");
    s.finish();
    return c;
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& doc) {
    Section root(doc, "");
    ExperimentConfig c;
    if (root.has("problem")) c.problem = parse_problem(root.child("problem"));
    if (root.has("schedule")) c.schedule = parse_schedule(root.child("schedule"));
    if (root.has("integrator")) c.integrator = parse_integrator(root.child("integrator"));
    if (root.has("oracle")) c.oracle = parse_oracle(root.child("oracle"));
    if (root.has("validation")) c.validation = parse_validation(root.child("validation"));
    if (root.has("sweep")) c.sweep = parse_sweep(root.child("sweep"));
    c.output_dir = root.string("output_dir", c.output_dir.string());
    c.allow_invalid_schedule = root.boolean("allow_invalid_schedule", c.allow_invalid_schedule);
    root.finish();
    return c;
}

ExperimentConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config parse error: {}", e.what()));
    }
    return parse_config(doc);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config file {}", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config_text(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

void override_seed(ExperimentConfig& config, std::uint64_t seed) {
    config.problem.saddle.seed = seed;
    config.problem.gnep.seed = seed;
}

ProblemInstance build_problem(const ProblemConfig& c) {
    if (c.kind == "interval_toy") return make_interval_toy(c.lo, c.hi);
    if (c.kind == "linear_1d") return make_linear_1d(c.slope, c.shift);
    if (c.kind == "saddle") return make_saddle_point(c.saddle);
    if (c.kind == "gnep") return make_gnep_linear(c.gnep);
    throw ConfigError(fmt::format("unknown problem kind '{}'", c.kind));
}

Schedule build_schedule(const ScheduleConfig& c, const ProblemInstance& problem) {
    if (c.kind == "power_law") return Schedule::power_law(c.power_law, problem.eta(), problem.mu());
    if (c.kind == "constant") {
        return c.lambda ? Schedule::constant(c.eps, c.beta, *c.lambda)
                        : Schedule::constant_normalized(c.eps, c.beta, c.sigma, problem.eta(), problem.mu());
    }
    if (c.kind == "custom") return Schedule::custom(c.table, c.sigma, problem.eta(), problem.mu());
    throw ConfigError(fmt::format("unknown schedule kind '{}'", c.kind));
}

Vector build_initial_point(const IntegratorSettings& s, Index dim) {
    if (!s.initial_point) return Vector::Constant(dim, s.initial_fill);
    if (static_cast<Index>(s.initial_point->size()) != dim) {
        throw ConfigError(fmt::format("config error at /integrator/initial_point: expected {} entries, got {}", dim,
                                      s.initial_point->size()));
    }
    return Eigen::Map<const Vector>(s.initial_point->data(), dim);
}

}  // namespace tsengflow::cli
