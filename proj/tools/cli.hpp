#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pairedk/properties.hpp"
#include "pairedk/tolerances.hpp"

namespace pairedk::cli {

struct Config {
    Tolerances tol;
    RunConfig run;
    int trials = 200;
};

/// Overlays a JSON config file on `base`; MalformedConfig names the offending key.
Config load_config(const std::string& path, Config base = {});
Config config_from_json(const nlohmann::json& j, Config base = {});

/// Exit codes: 0 success, 1 check failure, 2 usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pairedk::cli
