// Configuration ingestion and CSV/JSON emission.
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "squeeze/campaign.hpp"
#include "squeeze/model.hpp"
#include "squeeze/moments.hpp"

namespace squeeze {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shortest decimal that parses back to the same double.
std::string format_double(double x);

// Keys are the PhysicalParams field names; complex values are [re, im].
// Missing keys keep their defaults, unknown keys throw ConfigError.
PhysicalParams params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PhysicalParams& p);

nlohmann::json to_json(const ValidityReport& v);
nlohmann::json to_json(const OptResult& r);

nlohmann::json read_json_file(const std::string& path);

// Header t,xi2,re_jp,im_jp,re_jp2,im_jp2,jpjm,jmjp,na,nb,theta_star
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);

// Same schema plus a trailing `solver` column; xi2 and theta_star are
// recomputed from the moments.
void write_exact_csv(std::ostream& os, const std::vector<double>& times, const std::vector<MomentState>& moments,
                     long long n_atoms, const std::string& solver);

}  // namespace squeeze
