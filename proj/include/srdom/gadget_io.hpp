#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "gadgets.hpp"
#include "spec.hpp"

namespace srdom::io {

/// Contents of a `.gadget.json` file; vertex ids are 0-based in memory, 1-based on disk.
struct gadget_sidecar {
    std::string family;
    std::string sigma;
    std::string rho;
    std::vector<vertex> distinguished;
    std::map<std::string, int> constants;

    friend bool operator==(const gadget_sidecar&, const gadget_sidecar&) = default;
};

inline gadget_sidecar make_sidecar(const gadget_instance& instance, const sigma_rho_spec& spec)
{
    return {instance.family, spec.sigma.to_string(), spec.rho.to_string(), instance.distinguished, instance.constants};
}

inline std::string write_sidecar(const gadget_sidecar& sidecar)
{
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["family"] = sidecar.family;
    j["sigma"] = sidecar.sigma;
    j["rho"] = sidecar.rho;
    std::vector<int> ids;
    for (vertex v : sidecar.distinguished)
        ids.push_back(v + 1);
    j["distinguished"] = ids;
    j["constants"] = nlohmann::ordered_json::object();
    for (const auto& [name, value] : sidecar.constants)
        j["constants"][name] = value;
    return j.dump(2) + "\n";
}

inline gadget_sidecar read_sidecar(std::istream& in)
{
    nlohmann::json j;
    try {
        in >> j;
        if (j.at("schema").get<int>() != 1)
            throw error(error_kind::parse_error, "unsupported gadget sidecar schema");
        gadget_sidecar out;
        out.family = j.at("family").get<std::string>();
        out.sigma = j.at("sigma").get<std::string>();
        out.rho = j.at("rho").get<std::string>();
        for (int id : j.at("distinguished").get<std::vector<int>>()) {
            if (id < 1)
                throw error(error_kind::parse_error, "distinguished vertex ids are 1-based");
            out.distinguished.push_back(id - 1);
        }
        for (const auto& [name, value] : j.at("constants").items())
            out.constants[name] = value.get<int>();
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw error(error_kind::parse_error, std::string("malformed gadget sidecar: ") + e.what());
    }
}

} // namespace srdom::io
