#include "lgg/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "lgg/errors.hpp"

namespace lgg {
namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) {
        throw DomainError(where + " must be an object");
    }
    for (const auto& item : obj.items()) {
        if (!allowed.contains(item.key())) {
            throw DomainError("unknown key '" + item.key() + "' in " + where);
        }
    }
}

MatrixKind matrix_kind_from_string(const std::string& name) {
    for (const auto kind : {MatrixKind::gaussian, MatrixKind::extended, MatrixKind::compound}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw DomainError("unknown matrix kind: " + name);
}

template <typename T>
void read_if(const json& obj, const char* key, T& target) {
    if (obj.contains(key)) {
        target = obj.at(key).get<T>();
    }
}

FigureCurve parse_curve(const json& obj) {
    check_keys(obj,
               {"figure", "workers", "label", "matrix", "sources", "errors", "error_scale", "noise_sigma",
                "decoder", "block_weights", "greedy", "solver", "success_tolerance", "trials", "seed", "sweep"},
               "config");
    FigureCurve curve;
    TrialSpec& spec = curve.spec;
    curve.label = obj.value("label", std::string("curve"));

    if (obj.contains("matrix")) {
        const auto& m = obj.at("matrix");
        check_keys(m, {"rows", "cols", "kind", "normalize", "delta", "fixed"}, "matrix");
        read_if(m, "rows", spec.matrix.rows);
        read_if(m, "cols", spec.matrix.cols);
        if (m.contains("kind")) {
            spec.matrix.kind = matrix_kind_from_string(m.at("kind").get<std::string>());
        }
        read_if(m, "normalize", spec.matrix.normalize);
        read_if(m, "delta", spec.matrix.delta);
        read_if(m, "fixed", spec.matrix.fixed);
    }
    if (obj.contains("sources")) {
        spec.sources.clear();
        for (const auto& s : obj.at("sources")) {
            check_keys(s, {"length", "k", "scale"}, "source");
            SourceSpec source;
            read_if(s, "length", source.length);
            read_if(s, "k", source.k);
            read_if(s, "scale", source.scale);
            spec.sources.push_back(source);
        }
    } else {
        spec.sources = {SourceSpec{spec.matrix.cols, 0, 1.0}};
    }
    read_if(obj, "errors", spec.errors);
    read_if(obj, "error_scale", spec.error_scale);
    read_if(obj, "noise_sigma", spec.noise_sigma);
    if (obj.contains("decoder")) {
        spec.decoder = decoder_kind_from_string(obj.at("decoder").get<std::string>());
    }
    read_if(obj, "block_weights", spec.block_weights);
    if (obj.contains("greedy")) {
        const auto& g = obj.at("greedy");
        check_keys(g, {"alpha", "epsilon", "max_iterations", "club_cap"}, "greedy");
        read_if(g, "alpha", spec.greedy.alpha);
        read_if(g, "epsilon", spec.greedy.epsilon);
        read_if(g, "max_iterations", spec.greedy.max_iterations);
        if (g.contains("club_cap")) {
            spec.greedy.club_cap = g.at("club_cap").get<Index>();
        }
    }
    if (obj.contains("solver")) {
        const auto& s = obj.at("solver");
        check_keys(s, {"kind", "feasibility_tol", "optimality_tol", "acceptance_gap", "max_iterations"}, "solver");
        if (s.contains("kind")) {
            spec.solver.kind = solver_kind_from_string(s.at("kind").get<std::string>());
        }
        read_if(s, "feasibility_tol", spec.solver.feasibility_tol);
        read_if(s, "optimality_tol", spec.solver.optimality_tol);
        read_if(s, "acceptance_gap", spec.solver.acceptance_gap);
        read_if(s, "max_iterations", spec.solver.max_iterations);
    }
    read_if(obj, "success_tolerance", spec.success_tolerance);
    read_if(obj, "trials", spec.trials);
    read_if(obj, "seed", spec.seed);

    if (!obj.contains("sweep")) {
        throw DomainError("config needs a 'sweep' object");
    }
    const auto& sw = obj.at("sweep");
    check_keys(sw, {"mode", "source", "total", "values", "from", "to", "step"}, "sweep");
    const std::string mode = sw.value("mode", std::string("source_k"));
    if (mode == "source_k") {
        curve.axis.mode = SweepAxis::Mode::source_k;
    } else if (mode == "complement_errors") {
        curve.axis.mode = SweepAxis::Mode::complement_errors;
    } else {
        throw DomainError("unknown sweep mode: " + mode);
    }
    read_if(sw, "source", curve.axis.source);
    read_if(sw, "total", curve.axis.total);
    if (sw.contains("values")) {
        curve.values = sw.at("values").get<std::vector<Index>>();
    } else if (sw.contains("from") && sw.contains("to")) {
        curve.values = k_grid(sw.at("from").get<Index>(), sw.at("to").get<Index>(), sw.value("step", Index{1}));
    } else {
        throw DomainError("sweep needs 'values' or 'from'/'to'");
    }
    if (curve.values.empty()) {
        throw DomainError("sweep needs at least one value");
    }
    for (const Index v : curve.values) {
        curve.axis.apply(spec, v).validate();
    }
    return curve;
}

}  // namespace

SweepConfig parse_sweep_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw DomainError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw DomainError("config must be a JSON object");
    }
    SweepConfig config;
    config.figure = root.value("figure", config.figure);
    config.workers = root.value("workers", config.workers);
    try {
        if (root.contains("curves")) {
            json base = root;
            base.erase("curves");
            for (const auto& overrides : root.at("curves")) {
                json merged = base;
                merged.merge_patch(overrides);
                config.curves.push_back(parse_curve(merged));
            }
        } else {
            config.curves.push_back(parse_curve(root));
        }
    } catch (const json::exception& e) {
        throw DomainError(std::string("bad config value: ") + e.what());
    }
    return config;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_sweep_config(buffer.str());
}

std::vector<std::filesystem::path> run_sweep_config(const SweepConfig& config,
                                                    const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    for (const auto& curve : config.curves) {
        const auto points = sweep_curve(curve.spec, curve.axis, curve.values, SweepOptions{config.workers});
        const auto path = out_dir / (config.figure + "_" + curve.label + ".csv");
        std::ofstream out(path);
        if (!out) {
            throw std::runtime_error("cannot write " + path.string());
        }
        write_curve_csv(out, config.figure, curve.label, points);
        written.push_back(path);
    }
    return written;
}

}  // namespace lgg
