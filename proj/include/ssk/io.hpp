#pragma once

#include <complex>
#include <string>

#include "json.hpp"

#include "ssk/asymptotics.hpp"
#include "ssk/contour.hpp"
#include "ssk/disorder.hpp"
#include "ssk/experiments.hpp"
#include "ssk/mgf.hpp"
#include "ssk/rmt.hpp"
#include "ssk/saddle.hpp"

namespace ssk {

using nlohmann::json;

// Shortest decimal text that round-trips to the same double.
std::string format_double(double x);

json complex_json(std::complex<double> z);

void to_json(json& j, const DisorderSample& s);
void from_json(const json& j, DisorderSample& s);
void to_json(json& j, const ModelParams& p);
void to_json(json& j, const CriticalPoints& c);
void to_json(json& j, const MgfResult& r);
void to_json(json& j, const EventReport& r);
void to_json(json& j, const ContourSpec& s);
void from_json(const json& j, ContourSpec& s);
void to_json(json& j, const Contour& c);
void to_json(json& j, const TailEstimate& t);
void to_json(json& j, const BesselCheck& b);
void to_json(json& j, const OverlapMoments& m);
void to_json(json& j, const OverlapLaw& l);
void to_json(json& j, const Thresholds& t);
void from_json(const json& j, Thresholds& t);
void to_json(json& j, const SweepConfig& c);
void from_json(const json& j, SweepConfig& c);
void to_json(json& j, const SweepRecord& r);
void to_json(json& j, const Check& c);
void to_json(json& j, const ConvergenceGroup& g);
void to_json(json& j, const EventRow& r);
void to_json(json& j, const ScalingRow& r);

// Reads and validates a sweep configuration; UsageError on malformed input.
SweepConfig load_sweep_config(const std::string& path);

DisorderSample load_sample(const std::string& path);

// Writes `text` to `path`, creating parent directories; NumericalError on I/O failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace ssk
