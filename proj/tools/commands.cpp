#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lipsing/errors.hpp"
#include "lipsing/fixtures.hpp"
#include "plot.hpp"

namespace lipsing::cli {

namespace fs = std::filesystem;
using report::Json;

namespace {

// Two complexes from a parametric family: X1 near the limit X0.
struct Generated {
    std::string name;
    std::string kind;
    Json parameters;
    EmbeddedComplex x0;
    EmbeddedComplex x1;
};

struct Source {
    std::optional<PolynomialSystem> system;
    std::optional<Generated> generated;
    Json description;
};

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot read variety file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class T>
T param(const Json& p, const char* key, T fallback)
{
    return p.contains(key) ? p.at(key).get<T>() : fallback;
}

Generated generate(const Json& doc)
{
    Generated g;
    g.name = doc.value("name", std::string("generated"));
    g.kind = doc.at("generator").get<std::string>();
    g.parameters = doc.value("parameters", Json::object());
    const Json& p = g.parameters;
    if (g.kind == "pinched_circles") {
        const int n = param(p, "per_circle", 128);
        g.x1 = fixtures::pinched_circles(param(p, "t", 0.05), n);
        g.x0 = fixtures::pinched_circles(0.0, n);
    } else if (g.kind == "pinched_tori") {
        const int n = param(p, "per_circle", 32), around = param(p, "around", 48);
        const double offset = param(p, "offset", 3.0);
        g.x1 = fixtures::pinched_tori(param(p, "t", 0.2), n, around, offset);
        g.x0 = fixtures::pinched_tori(0.0, n, around, offset);
    } else if (g.kind == "concentric_polygons") {
        const int n = param(p, "n", 256);
        g.x0 = fixtures::regular_polygon(n, param(p, "r0", 1.0));
        g.x1 = fixtures::regular_polygon(n, param(p, "r1", 1.02));
    } else if (g.kind == "polygon") {
        g.x0 = g.x1 = fixtures::regular_polygon(param(p, "n", 256), param(p, "r", 1.0));
    } else if (g.kind == "torus_grid") {
        g.x0 = g.x1 = fixtures::torus_grid(param(p, "minor", 24), param(p, "major", 48),
                                           param(p, "r", 1.0), param(p, "R", 3.0));
    } else {
        throw InputError("unknown generator '" + g.kind + "'");
    }
    return g;
}

Source load(const std::string& path)
{
    const std::string text = read_file(path);
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception& e) {
        throw InputError(std::string("variety file is not valid JSON: ") + e.what());
    }
    Source s;
    if (doc.is_object() && doc.contains("generator")) {
        try {
            s.generated = generate(doc);
        } catch (const Json::exception& e) {
            throw InputError(std::string("bad generator parameters: ") + e.what());
        }
        s.description = {{"name", s.generated->name},
                         {"generator", s.generated->kind},
                         {"parameters", s.generated->parameters}};
    } else {
        s.system = parse_system(text);
        s.description = report::encode(*s.system);
    }
    return s;
}

std::vector<double> scales_or(const RunConfig& c, std::vector<double> fallback)
{
    return c.scales.empty() ? fallback : c.scales;
}

std::vector<double> default_scales(const PolynomialSystem& s)
{
    return s.mode == Mode::Germ ? std::vector<double>{1e-1, 1e-2, 1e-3}
                                : std::vector<double>{10.0, 100.0, 1000.0};
}

void write_text(const fs::path& path, const std::string& text, std::vector<std::string>& files)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    files.push_back(path.string());
}

Json config_json(const RunConfig& c, const Json& variety, const std::vector<double>& scales)
{
    return {{"command", c.command},
            {"variety_path", c.variety},
            {"variety", variety},
            {"scales", scales},
            {"count", c.count},
            {"seed", c.seed},
            {"ring", to_string(c.ring)},
            {"max_dim", c.max_dim},
            {"dim_k", c.dim_k},
            {"trials", c.trials}};
}

std::string fmt_betti(const std::vector<long long>& b)
{
    std::string s;
    for (std::size_t i = 0; i < b.size(); ++i)
        s += (i ? " " : "") + std::to_string(b[i]);
    return s;
}

struct Outcome {
    Json result = Json::object();
    std::string status = "completed";
    int exit_code = kCompleted;
    std::vector<std::pair<std::string, std::string>> plots;   // file name, svg
};

plot::Series profile_series(const LlneProfile& p, const std::string& label)
{
    plot::Series s{label, {}, {}};
    for (const ProfileEntry& e : p.entries) {
        s.x.push_back(e.t);
        s.y.push_back(e.report.C);
    }
    return s;
}

Outcome on_system(const RunConfig& c, const PolynomialSystem& sys, const std::vector<double>& scales)
{
    Outcome o;
    const std::string& cmd = c.command;
    if (cmd == "sample") {
        Json samples = Json::array();
        for (std::size_t i = 0; i < scales.size(); ++i)
            samples.push_back(report::encode(
                sample_link(sys, scales[i], c.count, mix_seed(c.seed, i), sys.mode), true));
        o.result["samples"] = samples;
    } else if (cmd == "lne" || cmd == "llne-profile") {
        const LlneProfile p = llne_profile(sys, scales, c.count, c.seed, sys.mode);
        o.result["llne_profile"] = report::encode(p);
        o.result["slope"] = p.slope;
        o.result["divergence"] = to_string(p.divergence);
        if (cmd == "lne" && sys.mode == Mode::Germ)
            o.result["germ_lne"] =
                report::encode(germ_lne_estimate(sys, scales.front(), c.count, mix_seed(c.seed, 1)));
        o.plots.emplace_back(cmd + "_C.svg",
                             plot::loglog("C(t) for " + sys.name, "t", "C(t)", {profile_series(p, "C(t)")}));
    } else if (cmd == "hausdorff") {
        const TangentConeModel cone = tangent_cone(sys, sys.mode, c.count, mix_seed(c.seed, 99));
        Json rows = Json::array();
        plot::Series s{"dist_H(X_t, cone link)", {}, {}};
        for (std::size_t i = 0; i < scales.size(); ++i) {
            const LinkSample x = sample_link(sys, scales[i], c.count, mix_seed(c.seed, i), sys.mode);
            const double d = hausdorff_distance(x.points, cone.link.points);
            rows.push_back({{"t", scales[i]}, {"hausdorff", d}, {"points", x.points.size()}});
            s.x.push_back(scales[i]);
            s.y.push_back(d);
        }
        o.result["cone"] = report::encode(cone.cone);
        o.result["heuristic_cone"] = cone.heuristic;
        o.result["convergence"] = rows;
        o.plots.emplace_back("hausdorff.svg",
                             plot::loglog("Hausdorff convergence for " + sys.name, "t", "distance", {s}));
    } else if (cmd == "systole") {
        Json rows = Json::array();
        for (std::size_t i = 0; i < scales.size(); ++i) {
            const LinkSample x = sample_link(sys, scales[i], c.count, mix_seed(c.seed, i), sys.mode);
            const LinkProjector projector(sys, scales[i]);
            const EmbeddedComplex k = link_complex(x, projector, {.triangles = true});
            Json e = report::encode(epsilon0_estimate(k));
            e["t"] = scales[i];
            rows.push_back(std::move(e));
        }
        o.result["systoles"] = rows;
    } else if (cmd == "transfer") {
        ConeLinkOptions opt;
        opt.certificate.trials = c.trials;
        opt.certificate.seed = mix_seed(c.seed, 2);
        const ConeLinkTransfer t = cone_link_transfer(sys, scales.front(), c.count, c.seed, sys.mode, opt);
        o.result["cone_link_transfer"] = report::encode(t);
        if (!t.run.hypothesis.passed) {
            o.status = "hypothesis-violated";
            o.exit_code = kInconclusive;
        }
    } else if (cmd == "betti") {
        Json rows = Json::array();
        std::vector<std::vector<std::string>> table;
        for (std::size_t i = 0; i < scales.size(); ++i) {
            const LinkHomology h =
                link_homology(sys, scales[i], c.count, mix_seed(c.seed, i), c.max_dim, c.ring);
            rows.push_back(report::encode(h));
            table.push_back({"X_t, t = " + std::to_string(scales[i]), fmt_betti(h.betti.betti)});
        }
        const TangentConeModel cone = tangent_cone(sys, sys.mode, c.count, mix_seed(c.seed, 99));
        const LinkHomology h = link_homology(cone, c.max_dim, c.ring);
        o.result["links"] = rows;
        o.result["cone_link"] = report::encode(h);
        table.push_back({"cone link", fmt_betti(h.betti.betti)});
        o.plots.emplace_back("betti.svg", plot::table("Betti numbers (" + std::string(to_string(c.ring)) +
                                                          ") for " + sys.name,
                                                      {"space", "b_0 .. b_d"}, table));
    } else if (cmd == "choke") {
        const ChokeProbe p = choking_probe(sys, scales, c.max_dim, c.count, c.seed, sys.mode);
        o.result["choke"] = report::encode(p);
        o.result["verdict"] = to_string(p.verdict);
    } else if (cmd == "smooth") {
        if (sys.mode != Mode::Germ)
            throw InputError("smooth needs a germ-mode variety");
        VerdictConfig v;
        v.scales = scales;
        v.choke_scales = scales;
        v.count = c.count;
        v.seed = c.seed;
        v.dim_k = c.dim_k;
        v.ring = c.ring;
        v.trials = c.trials;
        v.epsilon = scales.front();
        v.link_t = scales.size() > 1 ? scales[1] : scales.front();
        const SmoothnessReport r = smoothness_verdict(sys, v);
        o.result = report::encode(r);
        if (r.verdict == Verdict::Inconclusive) {
            o.status = "inconclusive";
            o.exit_code = kInconclusive;
        }
        if (r.profile)
            o.plots.emplace_back("smooth_C.svg", plot::loglog("C(t) for " + sys.name, "t", "C(t)",
                                                              {profile_series(*r.profile, "C(t)")}));
    } else if (cmd == "infinity") {
        if (sys.mode != Mode::Infinity)
            throw InputError("infinity needs an infinity-mode variety");
        InfinityConfig v;
        v.scales = scales;
        v.count = c.count;
        v.seed = c.seed;
        v.ring = c.ring;
        v.trials = c.trials;
        const InfinityReport r = infinity_analysis(sys, v);
        o.result = report::encode(r);
        if (std::any_of(r.criteria.begin(), r.criteria.end(),
                        [](const Criterion& k) { return k.status == "error"; })) {
            o.status = "inconclusive";
            o.exit_code = kInconclusive;
        }
        if (r.profile)
            o.plots.emplace_back("infinity_C.svg", plot::loglog("C(t) at infinity for " + sys.name, "t",
                                                                "C(t)", {profile_series(*r.profile, "C(t)")}));
    } else {
        throw InputError("command '" + cmd + "' is not defined for varieties");
    }
    return o;
}

Outcome on_generated(const RunConfig& c, const Generated& g)
{
    Outcome o;
    const std::string& cmd = c.command;
    auto both = [&](auto&& f) {
        return Json{{"x0", f(g.x0)}, {"x1", f(g.x1)}};
    };
    if (cmd == "systole") {
        o.result = both([](const EmbeddedComplex& k) { return report::encode(epsilon0_estimate(k)); });
    } else if (cmd == "lne") {
        o.result = both([](const EmbeddedComplex& k) { return report::encode(lne_constant(k)); });
    } else if (cmd == "hausdorff") {
        o.result["hausdorff"] = hausdorff_distance(g.x0.vertices(), g.x1.vertices());
    } else if (cmd == "betti") {
        o.result = both([&](const EmbeddedComplex& k) {
            BettiVector b = betti(ChainComplex::from(k), c.ring);
            return report::encode(b);
        });
    } else if (cmd == "transfer") {
        CertificateOptions opt;
        opt.trials = c.trials;
        opt.seed = c.seed;
        const TransferRun run = transfer_certificate(g.x0, g.x1, homology_generators(g.x1, 0), opt);
        o.result["transfer"] = report::encode(run);
        if (!run.hypothesis.passed) {
            o.status = "hypothesis-violated";
            o.exit_code = kInconclusive;
            o.result["refusal"] = run.certificates.empty()
                                      ? std::string("HypothesisViolated")
                                      : run.certificates.front().refusal;
        }
    } else {
        throw InputError("command '" + cmd + "' needs a polynomial variety");
    }
    return o;
}

RunResult aggregate(const RunConfig& c)
{
    RunResult res;
    std::vector<fs::path> files;
    if (fs::is_directory(c.out))
        for (const auto& entry : fs::directory_iterator(c.out))
            if (entry.path().extension() == ".json" && entry.path().filename() != "report.json")
                files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        res.exit_code = kInvalidInput;
        res.message = "no reports found in '" + c.out + "'";
        return res;
    }
    Json rows = Json::array();
    std::vector<std::vector<std::string>> table;
    for (const fs::path& f : files) {
        Json doc;
        try {
            doc = Json::parse(read_file(f.string()));
        } catch (const Json::exception&) {
            continue;
        }
        if (!doc.contains("payload"))
            continue;
        const Json& p = doc["payload"];
        Json row{{"file", f.filename().string()},
                 {"schema_version", doc.value("schema_version", "")},
                 {"command", p.value("/config/command"_json_pointer, std::string())},
                 {"variety", p.value("/config/variety/name"_json_pointer, std::string())},
                 {"status", p.value("status", std::string())}};
        if (p.contains("result") && p["result"].contains("verdict"))
            row["verdict"] = p["result"]["verdict"];
        table.push_back({row["file"], row["command"], row["variety"], row["status"],
                         row.contains("verdict") ? row["verdict"].get<std::string>() : ""});
        rows.push_back(std::move(row));
    }
    Json payload{{"command", "report"},
                 {"config", config_json(c, nullptr, {})},
                 {"status", "completed"},
                 {"result", {{"reports", rows}}}};
    res.document = report::document(std::move(payload));
    write_text(fs::path(c.out) / "report.json", res.document->dump(2) + "\n", res.files);
    write_text(fs::path(c.out) / "report.svg",
               plot::table("Reports in " + c.out, {"file", "command", "variety", "status", "verdict"}, table),
               res.files);
    res.message = std::to_string(rows.size()) + " reports summarized";
    return res;
}

}   // namespace

const std::vector<std::string>& commands()
{
    static const std::vector<std::string> names{"sample", "lne",   "llne-profile", "hausdorff",
                                                "systole", "transfer", "betti",   "choke",
                                                "smooth",  "infinity", "report"};
    return names;
}

RunResult run(const RunConfig& c)
{
    RunResult res;
    if (std::find(commands().begin(), commands().end(), c.command) == commands().end()) {
        res.exit_code = kInvalidInput;
        res.message = "unknown command '" + c.command + "'";
        return res;
    }
    for (double t : c.scales)
        if (!(t > 0.0) || !std::isfinite(t)) {
            res.exit_code = kInvalidInput;
            res.message = "scales must be positive and finite";
            return res;
        }
    try {
        fs::create_directories(c.out);
    } catch (const fs::filesystem_error& e) {
        res.exit_code = kInvalidInput;
        res.message = std::string("cannot create output directory: ") + e.what();
        return res;
    }
    if (c.command == "report")
        return aggregate(c);

    Source src;
    std::vector<double> scales;
    try {
        src = load(c.variety);
        if (src.system) {
            std::vector<double> fallback = default_scales(*src.system);
            if (c.command == "choke" && src.system->mode == Mode::Infinity)
                fallback = {100.0, 400.0, 1600.0, 6400.0};
            scales = scales_or(c, fallback);
        }
    } catch (const InputError& e) {
        res.exit_code = kInvalidInput;
        res.message = e.what();
        return res;
    } catch (const Error& e) {
        res.exit_code = kInvalidInput;
        res.message = std::string(e.kind()) + ": " + e.what();
        return res;
    }

    Outcome o;
    try {
        o = src.system ? on_system(c, *src.system, scales) : on_generated(c, *src.generated);
    } catch (const InputError& e) {
        res.exit_code = kInvalidInput;
        res.message = e.what();
        return res;
    } catch (const InvalidArgument& e) {
        res.exit_code = kInvalidInput;
        res.message = std::string(e.kind()) + ": " + e.what();
        return res;
    } catch (const Error& e) {
        o = Outcome{};
        o.status = "error";
        o.exit_code = kInconclusive;
        o.result = {{"error", e.kind()}, {"message", e.what()}};
    }

    Json payload{{"command", c.command},
                 {"config", config_json(c, src.description, scales)},
                 {"status", o.status},
                 {"result", std::move(o.result)}};
    res.document = report::document(std::move(payload));
    res.exit_code = o.exit_code;
    const fs::path dir(c.out);
    write_text(dir / (c.command + ".json"), res.document->dump(2) + "\n", res.files);
    for (const auto& [name, svg] : o.plots)
        write_text(dir / name, svg, res.files);
    res.message = c.command + ": " + o.status;
    return res;
}

}   // namespace lipsing::cli
