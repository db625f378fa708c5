// basis.hpp — Integer label catalog for the unperturbed basis

#pragma once

#include <array>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace eigencorr {

// Maps basis indices to the integer labels that identify each unperturbed
// state. The meaning of the label slots is model specific; `fields` names the
// slots in use, and labels are sorted lexicographically so the index order is
// reproducible from the labels alone.
struct BasisCatalog {
    std::size_t dim = 0;
    std::array<std::string, 3> fields{};
    std::vector<std::array<std::int64_t, 3>> labels;

    std::string label_string(std::size_t idx) const {
        if (idx >= dim) throw std::out_of_range("basis catalog: index out of range");
        std::ostringstream out;
        bool first = true;
        for (std::size_t f = 0; f < fields.size(); ++f) {
            if (fields[f].empty()) continue;
            if (!first) out << ',';
            out << fields[f] << '=' << labels[idx][f];
            first = false;
        }
        return out.str();
    }
};

inline void validate(const BasisCatalog& basis) {
    if (basis.labels.size() != basis.dim)
        throw std::invalid_argument("basis catalog: label count does not match dimension");
    for (std::size_t k = 1; k < basis.labels.size(); ++k)
        if (!(basis.labels[k - 1] < basis.labels[k]))
            throw std::invalid_argument("basis catalog: labels must be strictly increasing");
}

}  // namespace eigencorr
