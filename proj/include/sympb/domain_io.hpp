#pragma once

#include <sympb/support.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace sympb {

/// Domain files:
///   {"kind":"fourier","a0":1,"cos":[c1,...],"sin":[s1,...]}
///   {"kind":"ellipse","semi_axis_x":2,"semi_axis_y":1,"rotation":0}
/// An optional "name" field overrides the caller's default name.
inline DomainSpec domain_spec_from_json(const nlohmann::json& j, const std::string& default_name = "domain") {
    if (!j.is_object()) throw DomainError("domain file: top level must be an object");
    const std::string name = j.value("name", default_name);
    const auto kind = j.find("kind");
    if (kind == j.end() || !kind->is_string()) throw DomainError("domain file: missing string field 'kind'");

    auto number = [&](const char* key, bool required, double fallback) {
        const auto it = j.find(key);
        if (it == j.end()) {
            if (required) throw DomainError(std::string("domain file: missing field '") + key + "'");
            return fallback;
        }
        if (!it->is_number()) throw DomainError(std::string("domain file: field '") + key + "' must be a number");
        return it->get<double>();
    };
    auto list = [&](const char* key) {
        std::vector<double> v;
        const auto it = j.find(key);
        if (it == j.end()) return v;
        if (!it->is_array()) throw DomainError(std::string("domain file: field '") + key + "' must be an array");
        for (const auto& x : *it) {
            if (!x.is_number()) throw DomainError(std::string("domain file: non-numeric entry in '") + key + "'");
            v.push_back(x.get<double>());
        }
        return v;
    };

    const std::string k = kind->get<std::string>();
    if (k == "fourier") return {name, FourierSpec{number("a0", true, 0.0), list("cos"), list("sin")}};
    if (k == "ellipse")
        return {name, EllipseSpec{number("semi_axis_x", true, 0.0), number("semi_axis_y", true, 0.0),
                                  number("rotation", false, 0.0)}};
    throw DomainError("domain file: unknown kind '" + k + "'");
}

inline nlohmann::json to_json(const DomainSpec& spec) {
    nlohmann::json j;
    j["name"] = spec.name;
    if (const auto* f = std::get_if<FourierSpec>(&spec.shape)) {
        j["kind"] = "fourier";
        j["a0"] = f->a0;
        j["cos"] = f->cos_coeffs;
        j["sin"] = f->sin_coeffs;
    } else {
        const auto& e = std::get<EllipseSpec>(spec.shape);
        j["kind"] = "ellipse";
        j["semi_axis_x"] = e.semi_axis_x;
        j["semi_axis_y"] = e.semi_axis_y;
        j["rotation"] = e.rotation;
    }
    return j;
}

inline DomainSpec to_spec(const std::string& name, const FourierSupport& f) {
    return {name, FourierSpec{f.mean(), f.cos_coeffs(), f.sin_coeffs()}};
}

inline DomainSpec parse_domain_spec(const std::string& text, const std::string& default_name = "domain") {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError(std::string("domain file: malformed JSON: ") + e.what());
    }
    return domain_spec_from_json(j, default_name);
}

/// Reads a domain file; the file stem is the default name.
inline DomainSpec load_domain_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open domain file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_domain_spec(buf.str(), path.stem().string());
}

}  // namespace sympb
