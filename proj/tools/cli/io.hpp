#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "dl2u/dgp.hpp"
#include "dl2u/ks.hpp"
#include "dl2u/montecarlo.hpp"
#include "dl2u/oracles.hpp"
#include "dl2u/sequences.hpp"

namespace dl2u::cli {

using json = nlohmann::ordered_json;

/// Reals in CSV output: 17 significant digits, '.' separator.
std::string format_real(double v);

json to_json(const ModelParams& params);
ModelParams params_from_json(const json& j);

json to_json(const KsResult& r);
json to_json(const ExperimentSpec& spec);
json to_json(const ExperimentSummary& s);
json to_json(const Histogram& h);
json to_json(const MomentCheck& c);
json to_json(const VerifyReport& r);

/// `t,y,sigma2,u` with one row per t = 0..n; u is empty at t = 0.
void write_path_csv(std::ostream& out, const SimulatedPath& path);

/// Parses the format written by write_path_csv. The u column may be absent
/// or empty; `path.u` is then left empty. Throws InputError on malformed rows.
SimulatedPath read_path_csv(std::istream& in);

/// `kn,mean_ks,acceptance`.
void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows);

}  // namespace dl2u::cli
