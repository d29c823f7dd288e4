#include "bsmf/belief.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bsmf {

BeliefMixture BeliefMixture::star(std::size_t k) {
    if (k < 2) throw InputError("star structure requires k >= 2");
    std::vector<std::uint8_t> b(k * k, 0);
    for (std::size_t p = 0; p < k; ++p) {
        b[p * k] = 1;      // overlap column, endorsed by every belief
        b[p * k + p] = 1;  // own region
    }
    return BeliefMixture(k, std::move(b), {});
}

BeliefMixture BeliefMixture::identity(std::size_t k) {
    if (k < 1) throw InputError("identity structure requires k >= 1");
    std::vector<std::uint8_t> b(k * k, 0);
    for (std::size_t p = 0; p < k; ++p) b[p * k + p] = 1;
    return BeliefMixture(k, std::move(b), {});
}

BeliefMixture BeliefMixture::from_rows(const std::vector<std::vector<int>>& rows,
                                       std::vector<std::string> names) {
    const std::size_t k = rows.size();
    if (k == 0) throw InputError("belief mixture: matrix is empty");
    std::vector<std::uint8_t> b(k * k, 0);
    for (std::size_t p = 0; p < k; ++p) {
        if (rows[p].size() != k) {
            throw InputError("belief mixture: matrix is not square (row " + std::to_string(p) +
                             " has " + std::to_string(rows[p].size()) + " of " +
                             std::to_string(k) + " entries)");
        }
        for (std::size_t q = 0; q < k; ++q) {
            if (rows[p][q] != 0 && rows[p][q] != 1) {
                throw InputError("belief mixture: entries must be binary, got " +
                                 std::to_string(rows[p][q]) + " at (" + std::to_string(p) + "," +
                                 std::to_string(q) + ")");
            }
            b[p * k + q] = static_cast<std::uint8_t>(rows[p][q]);
        }
    }
    for (std::size_t p = 0; p < k; ++p) {
        bool any = false;
        for (std::size_t q = 0; q < k; ++q) any = any || b[p * k + q];
        if (!any) {
            throw InputError("belief mixture: row " + std::to_string(p) +
                             " is all zero (every source region must endorse something)");
        }
    }
    for (std::size_t q = 0; q < k; ++q) {
        bool any = false;
        for (std::size_t p = 0; p < k; ++p) any = any || b[p * k + q];
        if (!any) {
            throw InputError("belief mixture: column " + std::to_string(q) +
                             " is all zero (every claim region must be endorsed by someone)");
        }
    }
    for (std::size_t p = 0; p < k; ++p) {
        if (!b[p * k + p]) {
            throw InputError("belief mixture: diagonal entry " + std::to_string(p) +
                             " is zero (a region must endorse its own claims)");
        }
    }
    if (!names.empty() && names.size() != k) {
        throw InputError("belief mixture: expected " + std::to_string(k) + " region names, got " +
                         std::to_string(names.size()));
    }
    return BeliefMixture(k, std::move(b), std::move(names));
}

BeliefMixture BeliefMixture::from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("belief mixture: invalid JSON: ") + e.what());
    }
    if (!j.contains("rows") || !j["rows"].is_array()) {
        throw InputError("belief mixture: missing \"rows\" array");
    }
    std::vector<std::vector<int>> rows;
    for (const auto& row : j["rows"]) {
        if (!row.is_array()) throw InputError("belief mixture: \"rows\" must hold arrays");
        rows.emplace_back();
        for (const auto& v : row) {
            if (!v.is_number_integer()) {
                throw InputError("belief mixture: entries must be integers");
            }
            rows.back().push_back(v.get<int>());
        }
    }
    if (j.contains("k") && j["k"].get<std::size_t>() != rows.size()) {
        throw InputError("belief mixture: \"k\" does not match row count");
    }
    std::vector<std::string> names;
    if (j.contains("names")) names = j["names"].get<std::vector<std::string>>();
    return from_rows(rows, std::move(names));
}

BeliefMixture BeliefMixture::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("belief mixture: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_string(buf.str());
}

std::string BeliefMixture::to_json_string() const {
    nlohmann::json j;
    j["k"] = k_;
    auto rows = nlohmann::json::array();
    for (std::size_t p = 0; p < k_; ++p) {
        auto row = nlohmann::json::array();
        for (std::size_t q = 0; q < k_; ++q) row.push_back(static_cast<int>(at(p, q)));
        rows.push_back(row);
    }
    j["rows"] = rows;
    if (!names_.empty()) j["names"] = names_;
    return j.dump();
}

DenseMatrix BeliefMixture::dense() const {
    DenseMatrix m(k_, k_);
    for (std::size_t p = 0; p < k_; ++p) {
        for (std::size_t q = 0; q < k_; ++q) m(p, q) = static_cast<double>(at(p, q));
    }
    return m;
}

bool BeliefMixture::is_identity() const {
    for (std::size_t p = 0; p < k_; ++p) {
        for (std::size_t q = 0; q < k_; ++q) {
            if (at(p, q) != (p == q ? 1 : 0)) return false;
        }
    }
    return true;
}

}  // namespace bsmf
