#pragma once

#include <random>
#include <string>
#include <vector>

#include "flatforge/certificate.hpp"

namespace fuzz {

using flatforge::json;

struct Site {
    json::json_pointer ptr;
    int op;  // 0 +1, 1 -1, 2 flip, 3 append, 4 drop element, 5 duplicate element
};

inline void collect(const json& j, const json::json_pointer& at, std::vector<Site>& out) {
    if (j.is_number_integer()) {
        out.push_back({at, 0});
        out.push_back({at, 1});
    } else if (j.is_boolean()) {
        out.push_back({at, 2});
    } else if (j.is_string()) {
        out.push_back({at, 3});
    } else if (j.is_array()) {
        if (!j.empty()) {
            out.push_back({at, 4});
            out.push_back({at, 5});
        }
        for (std::size_t i = 0; i < j.size(); ++i) collect(j[i], at / i, out);
    } else if (j.is_object()) {
        for (const auto& [k, v] : j.items()) collect(v, at / k, out);
    }
}

// One seeded single-field change; describes it in *what.
inline json mutate(const json& cert, std::mt19937_64& rng, std::string* what = nullptr) {
    std::vector<Site> sites;
    collect(cert, json::json_pointer(), sites);
    const auto& s = sites[rng() % sites.size()];
    json out = cert;
    json& v = out[s.ptr];
    std::string desc = s.ptr.to_string();
    switch (s.op) {
    case 0: v = v.get<long long>() + 1; desc += " +1"; break;
    case 1: v = v.get<long long>() - 1; desc += " -1"; break;
    case 2: v = !v.get<bool>(); desc += " flipped"; break;
    case 3: v = v.get<std::string>() + "x"; desc += " appended"; break;
    case 4: {
        const auto i = rng() % v.size();
        v.erase(i);
        desc += " dropped [" + std::to_string(i) + "]";
        break;
    }
    default: {
        const auto i = rng() % v.size();
        json copy = v[i];
        v.insert(v.begin() + static_cast<std::ptrdiff_t>(i), copy);
        desc += " duplicated [" + std::to_string(i) + "]";
        break;
    }
    }
    if (what) *what = desc;
    return out;
}

}  // namespace fuzz
