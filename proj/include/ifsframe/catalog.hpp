#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ifsframe/ifs.hpp"

namespace ifsframe {

struct CatalogEntry {
    std::string name;
    AffineIfs ifs;
    std::string description;
};

inline std::vector<CatalogEntry> builtin_catalog() {
    return {
        {"mu3", AffineIfs(3, {0, 2}), "middle-third Cantor measure"},
        {"mu4", AffineIfs(4, {0, 2}), "quarter Cantor measure"},
        {"mu4_prime", AffineIfs(4, {0, 1}), "complement system of mu4; mu4 * mu4_prime = Lebesgue on [0,1]"},
        {"lebesgue", AffineIfs(2, {0, 1}), "Lebesgue measure on [0,1]"},
    };
}

inline std::optional<AffineIfs> catalog_lookup(const std::string& name) {
    for (const CatalogEntry& e : builtin_catalog()) {
        if (e.name == name) {
            return e.ifs;
        }
    }
    return std::nullopt;
}

} // namespace ifsframe
