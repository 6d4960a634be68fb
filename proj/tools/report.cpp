#include "report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

namespace lipsing::report {

Json number(double x)
{
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

Json point(const Point& p)
{
    Json a = Json::array();
    for (Eigen::Index i = 0; i < p.size(); ++i)
        a.push_back(p[i]);
    return a;
}

Json points(const PointSet& ps)
{
    Json a = Json::array();
    for (const Point& p : ps)
        a.push_back(point(p));
    return a;
}

Json encode(const PolynomialSystem& system)
{
    Json polys = Json::array();
    for (const Polynomial& p : system.polynomials)
        polys.push_back(p.to_string(system.variables));
    return {{"name", system.name},
            {"field", to_string(system.field)},
            {"mode", to_string(system.mode)},
            {"variables", system.variables},
            {"polynomials", polys}};
}

Json encode(const LinkSample& s, bool with_points)
{
    Json j{{"t", number(s.t)},
           {"mode", to_string(s.mode)},
           {"count", s.points.size()},
           {"requested", s.requested},
           {"converged", s.converged},
           {"residual_bound", s.residual_bound}};
    if (with_points)
        j["points"] = points(s.points);
    return j;
}

Json encode(const LneReport& r)
{
    return {{"C", r.C},
            {"metric", r.metric == OuterMetric::Spherical ? "spherical" : "euclidean"},
            {"witness", {r.witness_a, r.witness_b}},
            {"witness_points", {point(r.point_a), point(r.point_b)}},
            {"inner", r.inner},
            {"outer", r.outer},
            {"pairs", r.pairs},
            {"ratio_median", r.ratio_median},
            {"ratio_p90", r.ratio_p90},
            {"ratio_p99", r.ratio_p99}};
}

Json encode(const LlneProfile& p)
{
    Json entries = Json::array();
    for (const ProfileEntry& e : p.entries)
        entries.push_back({{"t", e.t},
                           {"C", e.report.C},
                           {"doubled_C", e.doubled_C},
                           {"low_confidence", e.low_confidence},
                           {"points", e.points},
                           {"edges", e.edges},
                           {"lne", encode(e.report)}});
    return {{"mode", to_string(p.mode)},
            {"entries", entries},
            {"slope", p.slope},
            {"intercept", p.intercept},
            {"residual", p.residual},
            {"divergence", to_string(p.divergence)},
            {"low_confidence", p.low_confidence}};
}

Json encode(const GermLneEstimate& g)
{
    return {{"C", g.report.C},
            {"radii", g.radii},
            {"points", g.points},
            {"edges", g.edges},
            {"lne", encode(g.report)}};
}

Json encode(const BettiVector& b)
{
    Json j{{"ring", to_string(b.ring)}, {"betti", b.betti}};
    if (b.ring == Ring::Z)
        j["torsion"] = b.torsion;
    return j;
}

Json encode(const LinkHomology& h)
{
    Json scan = Json::array();
    for (const RadiusScan& s : h.scan) {
        Json e{{"radius", s.radius}, {"simplices", s.simplices}};
        if (s.betti)
            e["betti"] = s.betti->betti;
        else
            e["error"] = s.error;
        scan.push_back(std::move(e));
    }
    return {{"t", number(h.t)},
            {"homology", encode(h.betti)},
            {"radius", h.radius},
            {"gap", h.gap},
            {"landmarks", h.landmarks},
            {"plateau", h.plateau},
            {"scan", scan}};
}

Json encode(const LoopPath& loop)
{
    return {{"vertices", loop.vertices}, {"length", loop.length}};
}

Json encode(const SystoleEstimate& s)
{
    Json j{{"epsilon0", number(s.epsilon0)},
           {"infinite", s.infinite()},
           {"method", s.method},
           {"candidates", s.candidates}};
    if (!s.infinite())
        j["witness"] = encode(s.witness);
    return j;
}

Json encode(const Hypothesis& h)
{
    Json j{{"dist_h", h.dist_h},
           {"C0", h.C0},
           {"C1", h.C1},
           {"C", h.C},
           {"epsilon0_x0", number(h.epsilon0_x0)},
           {"epsilon0_x1", number(h.epsilon0_x1)},
           {"bound", number(h.bound)},
           {"iso_bound", number(h.iso_bound)},
           {"eps", h.eps},
           {"eps_admissible", h.eps_admissible},
           {"passed", h.passed},
           {"isomorphism", h.isomorphism}};
    if (h.epsilon0_override)
        j["epsilon0_override"] = *h.epsilon0_override;
    return j;
}

namespace {

Json encode_class(const LoopClass& c)
{
    Json j{{"z2", c.z2}};
    if (c.z)
        j["z"] = *c.z;
    return j;
}

}   // namespace

Json encode(const TransferRun& run)
{
    Json certs = Json::array();
    for (const TransferCertificate& c : run.certificates) {
        Json j{{"input", encode(c.input)},
               {"input_class", encode_class(c.input_class)},
               {"trials", c.trials},
               {"trials_agreeing", c.trials_agreeing},
               {"stable", c.stable},
               {"max_segment", c.max_segment},
               {"segment_bound", c.segment_bound},
               {"direction", c.direction},
               {"caveat", c.caveat}};
        if (c.output)
            j["output"] = encode(*c.output);
        if (c.output_class)
            j["output_class"] = encode_class(*c.output_class);
        if (!c.refusal.empty())
            j["refusal"] = c.refusal;
        certs.push_back(std::move(j));
    }
    return {{"hypothesis", encode(run.hypothesis)},
            {"x0_basepoint", run.x0_basepoint},
            {"y0_basepoint", run.y0_basepoint},
            {"rank_x0", run.rank_x0},
            {"rank_x1", run.rank_x1},
            {"homomorphism", {{"pairs", run.homomorphism.pairs}, {"holding", run.homomorphism.holding}}},
            {"certificates", certs}};
}

Json encode(const ConeLinkTransfer& t)
{
    return {{"mode", to_string(t.mode)},
            {"t", t.t},
            {"link_points", t.link_points},
            {"cone_points", t.cone_points},
            {"heuristic_cone", t.heuristic_cone},
            {"obstruction", t.obstruction},
            {"obstruction_note", t.obstruction_note},
            {"run", encode(t.run)}};
}

Json encode(const ChokeProbe& p)
{
    Json records = Json::array();
    for (const ChokeRecord& r : p.records)
        records.push_back({{"t", r.t},
                           {"focus", point(r.focus)},
                           {"focus_distance", r.focus_distance},
                           {"patch_radius", r.patch_radius},
                           {"patch_points", r.patch_points},
                           {"found", r.found},
                           {"support_diameter", r.support_diameter},
                           {"filling_diameter", r.filling_diameter},
                           {"never_fills", r.never_fills},
                           {"note", r.note}});
    return {{"dim", p.dim},
            {"mode", to_string(p.mode)},
            {"foci", points(p.foci)},
            {"records", records},
            {"verdict", to_string(p.verdict)},
            {"reason", p.reason}};
}

Json encode(const MultiplicityReport& m)
{
    Json j{{"degree", m.degree},
           {"t", m.t},
           {"direction", point(m.direction)},
           {"conditions", m.conditions},
           {"starts", m.starts},
           {"c_bound", m.c_bound},
           {"redraws", m.redraws},
           {"fiber", points(m.fiber)}};
    if (m.symbolic_order)
        j["symbolic_order"] = *m.symbolic_order;
    if (m.agree)
        j["agree"] = *m.agree;
    return j;
}

Json encode(const Criterion& c)
{
    return {{"name", c.name}, {"status", c.status}, {"detail", c.detail}};
}

Json encode(const SmoothnessReport& r)
{
    Json criteria = Json::array();
    for (const Criterion& c : r.criteria)
        criteria.push_back(encode(c));
    Json j{{"field", to_string(r.field)},
           {"verdict", to_string(r.verdict)},
           {"suppressed", r.suppressed},
           {"caveat", r.caveat},
           {"criteria", criteria}};
    if (r.profile)
        j["lne_profile"] = encode(*r.profile);
    if (r.germ_lne)
        j["germ_lne"] = encode(*r.germ_lne);
    if (r.link) {
        j["link"] = encode(*r.link);
        j["sphere_betti"] = r.sphere_betti;
    }
    if (r.cone_link) {
        j["cone_link"] = encode(*r.cone_link);
        j["cone_dims_checked"] = r.cone_dims_checked;
    }
    if (r.transfer)
        j["cone_link_transfer"] = encode(*r.transfer);
    if (r.choke)
        j["choke"] = encode(*r.choke);
    if (r.symbolic_order)
        j["symbolic_order"] = *r.symbolic_order;
    if (r.multiplicity)
        j["multiplicity"] = encode(*r.multiplicity);
    return j;
}

Json encode(const InfinityReport& r)
{
    Json criteria = Json::array();
    for (const Criterion& c : r.criteria)
        criteria.push_back(encode(c));
    Json j{{"obstruction", r.obstruction},
           {"obstruction_note", r.obstruction_note},
           {"criteria", criteria}};
    if (r.profile)
        j["llne_profile"] = encode(*r.profile);
    if (r.link)
        j["link"] = encode(*r.link);
    if (r.cone_link)
        j["cone_link"] = encode(*r.cone_link);
    if (r.transfer)
        j["cone_link_transfer"] = encode(*r.transfer);
    if (r.choke)
        j["choke"] = encode(*r.choke);
    return j;
}

Json document(Json payload)
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return {{"schema_version", kSchemaVersion},
            {"payload", std::move(payload)},
            {"metadata", {{"generated_at", stamp}, {"tool", "lipsing"}}}};
}

std::string payload_text(const Json& doc)
{
    return doc.at("payload").dump(2);
}

}   // namespace lipsing::report
