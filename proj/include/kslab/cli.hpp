#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kslab/mesh.hpp"

namespace kslab {

struct RunConfig {
    std::string command;
    std::string preset;
    std::string spec;
    std::optional<double> theta;
    std::optional<int> n;
    std::optional<double> eps;
    std::optional<int> panels;
    std::optional<int> order;
    std::optional<int> grading_levels;
    std::optional<double> grading_ratio;
    std::optional<int> endpoint_levels;
    std::optional<int> nodes;
    double tol = 1e-12;
    double delta = 0.01;
    std::vector<int> ladder;
    std::string battery = "default";
    bool matrix_route = true;
    bool sweep = false;
    std::string out = ".";
    std::uint64_t seed = 0;

    nlohmann::json to_json() const;
    // rejects unknown keys
    static RunConfig from_json(const nlohmann::json& j);
    void validate() const;
};

// fills unset mesh fields with the per-command defaults
void resolve_defaults(RunConfig& cfg, bool smooth_geometry);
MeshParams mesh_params(const RunConfig& cfg);

// runs one command, writing its files under cfg.out; throws kslab errors
void run_command(RunConfig cfg, std::ostream& log);

// full command line front end; returns the process exit code
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// 0 ok, 2 usage/input, 3 resource, 4 numeric
int exit_code_for(const std::exception& e);

}  // namespace kslab
