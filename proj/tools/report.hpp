#pragma once

// JSON encodings of analysis results.  Every report is one document:
//   { "schema_version", "payload": { "command", "config", "status", "result" },
//     "metadata": { "generated_at", "tool" } }
// Only `payload` is covered by the determinism guarantee.

#include <string>

#include <json.hpp>

#include "lipsing/pipeline.hpp"

namespace lipsing::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";

Json number(double x);   // null for non-finite values
Json point(const Point& p);
Json points(const PointSet& ps);

Json encode(const PolynomialSystem& system);
Json encode(const LinkSample& sample, bool with_points);
Json encode(const LneReport& r);
Json encode(const LlneProfile& p);
Json encode(const GermLneEstimate& g);
Json encode(const BettiVector& b);
Json encode(const LinkHomology& h);
Json encode(const SystoleEstimate& s);
Json encode(const LoopPath& loop);
Json encode(const Hypothesis& h);
Json encode(const TransferRun& run);
Json encode(const ConeLinkTransfer& t);
Json encode(const ChokeProbe& p);
Json encode(const MultiplicityReport& m);
Json encode(const Criterion& c);
Json encode(const SmoothnessReport& r);
Json encode(const InfinityReport& r);

/// Wraps a payload with schema version and metadata.
Json document(Json payload);

/// Deterministic serialization of the payload (sorted insertion order,
/// shortest round-trip doubles).
std::string payload_text(const Json& doc);

}   // namespace lipsing::report
