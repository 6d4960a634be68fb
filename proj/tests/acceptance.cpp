// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <complex>
#include <fstream>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include "commands.hpp"
#include "lipsing/errors.hpp"
#include "lipsing/fixtures.hpp"
#include "lipsing/pipeline.hpp"

using namespace lipsing;
using std::numbers::pi;

namespace {

const std::string kFixtures = LIPSING_FIXTURE_DIR;

struct Check {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

PolynomialSystem load(const std::string& name)
{
    std::ifstream in(kFixtures + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_system(ss.str());
}

int winding(const EmbeddedComplex& c, const LoopPath& loop)
{
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < loop.vertices.size(); ++i) {
        const Point& a = c.vertex(loop.vertices[i]);
        const Point& b = c.vertex(loop.vertices[i + 1]);
        double d = std::atan2(b[1], b[0]) - std::atan2(a[1], a[0]);
        d -= 2 * pi * std::round(d / (2 * pi));
        total += d;
    }
    return static_cast<int>(std::lround(total / (2 * pi)));
}

LoopPath polygon_loop(const EmbeddedComplex& gon, int k)
{
    const int n = static_cast<int>(gon.num_vertices());
    std::vector<int> seq{0};
    for (int turn = 0; turn < std::abs(k); ++turn)
        for (int i = 1; i <= n; ++i)
            seq.push_back(((k >= 0 ? i : -i) % n + n) % n);
    return make_loop(gon, seq);
}

void criterion_1(Check& c)
{
    const auto start = std::chrono::steady_clock::now();
    const LlneProfile p =
        llne_profile(load("cusp.json"), {1e-1, 1e-2, 1e-3, 1e-4}, 400, 1, Mode::Germ);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    // Branch oracle: sheets y = +-x^{3/2} sit t^{1/2} apart on X_t, so C ~ t^{-1/2}.
    c.detail << "slope " << p.slope << " (branch oracle -0.5), " << secs << " s";
    c.require(p.slope >= -0.7 && p.slope <= -0.3, "slope in [-0.7, -0.3]");
    c.require(p.divergence == Divergence::Violating, "LLNE-violating");
    c.require(secs <= 30.0, "runtime <= 30 s");
}

void criterion_2(Check& c)
{
    const PolynomialSystem line = load("complex_line.json");
    const LlneProfile p = llne_profile(line, {1e-1, 1e-2, 1e-3}, 400, 1, Mode::Germ);
    double worst = 0.0;
    for (const ProfileEntry& e : p.entries)
        worst = std::max(worst, e.report.C);
    const SmoothnessReport r = smoothness_verdict(line, {});
    c.detail << "max C(t) " << worst;
    c.require(worst <= 1.05, "C(t) <= 1.05");
    c.require(r.multiplicity && r.multiplicity->degree == 1, "d = 1");
    c.require(r.symbolic_order && *r.symbolic_order == 1, "ord = 1");
    c.require(r.verdict == Verdict::SmoothEvidence, "smooth-evidence");
    if (r.multiplicity)
        c.detail << ", d " << r.multiplicity->degree;
    c.detail << ", verdict " << to_string(r.verdict);
}

void criterion_3(Check& c)
{
    const auto start = std::chrono::steady_clock::now();
    const EmbeddedComplex x0 = fixtures::regular_polygon(256, 1.0);
    const EmbeddedComplex x1 = fixtures::regular_polygon(256, 1.02);
    const std::vector<int> ks{-1, 0, 1, 2};
    std::vector<LoopPath> loops;
    for (int k : ks)
        loops.push_back(polygon_loop(x1, k));
    const TransferRun run = transfer_certificate(x0, x1, loops, {.trials = 20, .seed = 7});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    // epsilon0 = perimeter, C = half perimeter over diameter.
    const double e0 = 256 * 2 * std::sin(pi / 256), C = e0 / 4.0;
    const double oracle = e0 / (20 * C * C);
    c.detail << "bound " << run.hypothesis.bound << " (oracle " << oracle << ")";
    c.require(run.hypothesis.passed, "hypothesis passes");
    c.require(std::abs(run.hypothesis.bound - oracle) <= 0.02 * oracle, "bound matches");
    c.require(std::abs(run.hypothesis.bound - 0.127) <= 0.005, "bound ~ 0.127");
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const TransferCertificate& t = run.certificates[i];
        c.require(t.output && winding(x0, *t.output) == ks[i], "winding k = " + std::to_string(ks[i]));
        c.require(t.trials == 20 && t.trials_agreeing == 20, "20/20 trials");
    }
    c.require(run.homomorphism.pairs > 0 && run.homomorphism.holds(), "homomorphism");
    c.detail << ", homomorphism " << run.homomorphism.holding << "/" << run.homomorphism.pairs << ", "
             << secs << " s";
    c.require(secs <= 10.0, "runtime <= 10 s");
}

void criterion_4(Check& c)
{
    const auto start = std::chrono::steady_clock::now();
    const EmbeddedComplex x0 = fixtures::pinched_circles(0.0, 128);
    const EmbeddedComplex x1 = fixtures::pinched_circles(0.05, 128);
    const TransferRun run = transfer_certificate(x0, x1, homology_generators(x1, 0), {.trials = 20, .seed = 3});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.detail << "C1 " << run.hypothesis.C1 << ", dist_H " << run.hypothesis.dist_h << ", bound "
             << run.hypothesis.bound << ", " << secs << " s";
    c.require(!run.hypothesis.passed, "hypothesis refused");
    c.require(!run.certificates.empty(), "certificates present");
    for (const TransferCertificate& t : run.certificates) {
        c.require(!t.output && !t.output_class, "no class emitted");
        c.require(t.refusal.rfind("HypothesisViolated", 0) == 0, "HypothesisViolated refusal");
    }
    c.require(secs <= 10.0, "runtime <= 10 s");
}

void criterion_5(Check& c)
{
    const double gon = epsilon0_estimate(fixtures::regular_polygon(256, 1.0)).epsilon0;
    const double torus = epsilon0_estimate(fixtures::torus_grid(24, 48, 1.0, 3.0)).epsilon0;
    c.detail << "256-gon " << gon << ", torus " << torus << " (2 pi = " << 2 * pi << ")";
    c.require(std::abs(gon - 2 * pi) <= 0.05 * 2 * pi, "256-gon within 5%");
    c.require(std::abs(torus - 2 * pi) <= 0.10 * 2 * pi, "torus within 10%");
}

void criterion_6(Check& c)
{
    const auto oct = betti(ChainComplex::from(fixtures::octahedron()), Ring::Z2).betti;
    const auto tor = betti(ChainComplex::from(fixtures::seven_vertex_torus()), Ring::Z2).betti;
    const auto rp3 = betti(fixtures::real_projective_3space(), Ring::Z2).betti;
    c.detail << "octahedron b1 " << oct[1] << ", torus b1 " << tor[1] << ", RP3 b1 " << rp3[1];
    c.require(oct == std::vector<long long>{1, 0, 1}, "octahedron (1,0,1)");
    c.require(tor == std::vector<long long>{1, 2, 1}, "torus (1,2,1)");
    c.require(rp3.size() > 1 && rp3[1] == 1, "RP3 b1 = 1");
}

void criterion_7(Check& c)
{
    const auto start = std::chrono::steady_clock::now();
    VerdictConfig cfg;
    cfg.count = 2000;
    cfg.dim_k = 2;
    const SmoothnessReport r = smoothness_verdict(load("quadric_cone.json"), cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.require(r.profile.has_value(), "profile computed");
    if (r.profile) {
        double lo = kInfinity, hi = 0.0;
        for (const ProfileEntry& e : r.profile->entries) {
            lo = std::min(lo, e.report.C);
            hi = std::max(hi, e.report.C);
        }
        c.detail << "C(t) in [" << lo << ", " << hi << "]";
        c.require(hi <= 1.10 * lo, "C scale-invariant within 10%");
        c.require(r.profile->divergence == Divergence::Bounded, "LNE bounded");
    }
    c.require(r.cone_link && r.cone_link->betti.betti[1] == 1, "cone link b1 = 1");
    if (r.cone_link)
        c.detail << ", cone link b1 " << r.cone_link->betti.betti[1];
    c.require(r.verdict == Verdict::NonSmoothEvidence, "non-smooth-evidence");
    c.detail << ", verdict " << to_string(r.verdict) << ", " << secs << " s";
    c.require(secs <= 120.0, "runtime <= 2 min");
}

void criterion_8(Check& c)
{
    struct Case {
        const char* file;
        int degree;
    };
    for (const Case& k : {Case{"cusp.json", 2}, Case{"graph_xy.json", 1}, Case{"plane.json", 1}}) {
        const PolynomialSystem s = load(k.file);
        const TangentConeModel cone = tangent_cone(s, Mode::Germ, 200, 11);
        bool stable = true, agree = true;
        for (std::uint64_t dir = 0; dir < 5; ++dir)
            for (double t : {0.01, 0.005}) {
                const MultiplicityReport m = covering_degree(s, cone, t, 100 + dir);
                stable = stable && m.degree == k.degree;
                agree = agree && m.agree && *m.agree;
            }
        c.detail << s.name << " d " << k.degree << (stable ? "" : "?") << "; ";
        c.require(stable, std::string(k.file) + " degree stable");
        c.require(agree, std::string(k.file) + " degree = ord");
    }
    // Closed-form cusp fiber: y = +-(t v0)^{3/2}.
    const PolynomialSystem cusp = load("cusp.json");
    const MultiplicityReport m = covering_degree(cusp, tangent_cone(cusp, Mode::Germ, 200, 11), 0.01, 5);
    const std::complex<double> x(0.01 * m.direction[0], 0.01 * m.direction[1]), y = std::pow(x, 1.5);
    double err = 0.0;
    for (const Point& p : m.fiber) {
        const std::complex<double> fy(p[2], p[3]);
        err = std::max(err, std::min(std::abs(fy - y), std::abs(fy + y)));
    }
    c.detail << "cusp fiber error " << err;
    c.require(m.fiber.size() == 2 && err < 1e-9, "cusp fiber matches the closed form");
}

void criterion_9(Check& c)
{
    VerdictConfig cfg;
    cfg.dim_k = 3;
    const SmoothnessReport r = smoothness_verdict(load("brieskorn.json"), cfg);
    c.require(r.suppressed, "verdict suppressed");
    c.require(r.verdict == Verdict::Inconclusive, "no smoothness verdict");
    c.require(r.caveat.find("real") != std::string::npos, "real-field caveat");
    c.require(r.profile && r.profile->divergence == Divergence::Bounded, "LNE bounded");
    c.require(r.link && r.link->betti.betti.size() > 1 && r.link->betti.betti[1] == 0, "trivial H1");
    c.require(r.symbolic_order && *r.symbolic_order == 2021, "symbolic order 2021");
    if (r.profile)
        c.detail << "profile " << to_string(r.profile->divergence) << " (slope " << r.profile->slope << ")";
    if (r.link)
        c.detail << ", link b1 " << r.link->betti.betti[1];
    if (r.symbolic_order)
        c.detail << ", order " << *r.symbolic_order;
    c.detail << ", suppressed " << std::boolalpha << r.suppressed;
}

void criterion_10(Check& c)
{
    InfinityConfig cfg;
    cfg.choke = false;
    const InfinityReport q = infinity_analysis(load("affine_quadric_infinity.json"), cfg);
    c.require(q.profile.has_value(), "profile computed");
    if (q.profile) {
        const auto& e = q.profile->entries;
        bool increasing = true;
        for (std::size_t i = 1; i < e.size(); ++i)
            increasing = increasing && e[i].report.C > e[i - 1].report.C;
        c.detail << "quadric C(t) =";
        for (const ProfileEntry& x : e)
            c.detail << " " << x.report.C;
        c.require(increasing, "C(t) strictly increasing");
        c.require(e.back().report.C >= 1.5 * e.front().report.C, "C(1000) >= 1.5 C(10)");
    }
    c.detail << "; " << q.obstruction_note;
    c.require(q.obstruction, "Z/2 obstruction reported");

    const PolynomialSystem graph = load("graph_xy_infinity.json");
    const ChokeProbe p = choking_probe(graph, {100, 400, 1600, 6400}, 1, 2000, 1, Mode::Infinity);
    c.detail << "; z = xy " << to_string(p.verdict);
    c.require(p.verdict == ChokeVerdict::Suspected, "z = xy choking-suspected");
}

void criterion_11(Check& c)
{
    const std::string out = (std::filesystem::temp_directory_path() / "lipsing_acceptance").string();
    struct Run {
        const char* command;
        const char* file;
        std::size_t count;
    };
    const std::vector<Run> runs{{"sample", "cusp.json", 100},         {"lne", "cusp.json", 200},
                                {"llne-profile", "cusp.json", 200},   {"hausdorff", "cusp.json", 200},
                                {"systole", "cusp.json", 200},        {"transfer", "pinched_circles.json", 0},
                                {"betti", "cusp.json", 200},          {"choke", "cusp.json", 200},
                                {"smooth", "cusp.json", 200},         {"infinity", "affine_quadric_infinity.json", 300},
                                {"report", "", 0}};
    int identical = 0;
    for (const Run& r : runs) {
        cli::RunConfig cfg;
        cfg.command = r.command;
        cfg.variety = kFixtures + "/" + r.file;
        cfg.seed = 42;
        cfg.out = out;
        cfg.trials = 4;
        if (r.count)
            cfg.count = r.count;
        const cli::RunResult a = cli::run(cfg);
        const cli::RunResult b = cli::run(cfg);
        const bool same = a.document && b.document &&
                          report::payload_text(*a.document) == report::payload_text(*b.document);
        identical += same;
        c.require(same, std::string(r.command) + " payload identical");
    }
    c.detail << identical << "/" << runs.size() << " commands byte-identical";
}

}   // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
        {"1 cusp LNE divergence", criterion_1},
        {"2 linear baseline", criterion_2},
        {"3 transfer happy path", criterion_3},
        {"4 transfer refusal", criterion_4},
        {"5 systole accuracy", criterion_5},
        {"6 homology ground truth", criterion_6},
        {"7 quadric cone verdict", criterion_7},
        {"8 covering degree", criterion_8},
        {"9 real-case guard", criterion_9},
        {"10 infinity analysis", criterion_10},
        {"11 determinism", criterion_11},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Check c;
        try {
            fn(c);
        } catch (const std::exception& e) {
            c.pass = false;
            c.detail << " [exception: " << e.what() << "]";
        }
        failed += !c.pass;
        std::cout << (c.pass ? "PASS " : "FAIL ") << name << ": " << c.detail.str() << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
