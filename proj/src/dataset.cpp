#include "pmdep/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "pmdep/errors.hpp"
#include "pmdep/rng.hpp"

namespace pmdep {

void Dataset::validate() const {
    if (y.size() != x.rows())
        throw input_error("dataset: y length does not match covariate row count");
    if (n_rows() < 4) throw input_error("dataset: need at least 4 observations");
    if (w_cols.empty()) throw input_error("dataset: W block must have at least one column");

    std::vector<bool> seen(x.cols(), false);
    auto mark = [&](const std::vector<std::size_t>& cols, const char* name) {
        for (std::size_t c : cols) {
            if (c >= x.cols())
                throw input_error(std::string("dataset: ") + name + " column index out of range");
            if (seen[c])
                throw input_error(std::string("dataset: ") + name + " block repeats a column");
            seen[c] = true;
        }
    };
    mark(z_cols, "Z");
    mark(w_cols, "W");
    if (z_cols.size() + w_cols.size() != x.cols())
        throw input_error("dataset: Z and W blocks must cover all covariate columns");

    for (std::size_t i = 0; i < n_rows(); ++i) {
        if (!std::isfinite(y[i]))
            throw input_error("dataset: non-finite response at row " + std::to_string(i + 1));
        for (std::size_t j = 0; j < x.cols(); ++j)
            if (!std::isfinite(x(i, j)))
                throw input_error("dataset: non-finite covariate at row " + std::to_string(i + 1) +
                                  ", column " + std::to_string(j + 1));
    }
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, std::size_t row, const std::string& col) {
    const std::string s = trim(raw);
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        throw input_error("csv: non-numeric cell at row " + std::to_string(row) + ", column " +
                          col + " (value \"" + s + "\")");
    if (!std::isfinite(v))
        throw input_error("csv: non-finite cell at row " + std::to_string(row) + ", column " +
                          col);
    return v;
}

} // namespace

Dataset load_csv(const std::filesystem::path& path, const RoleSpec& role_spec) {
    std::ifstream in(path);
    if (!in) throw input_error("csv: cannot open file " + path.string());
    if (role_spec.response.empty()) throw input_error("csv: no response column named");
    if (role_spec.w.empty()) throw input_error("csv: need at least one W column");

    std::string line;
    if (!std::getline(in, line)) throw input_error("csv: empty file " + path.string());
    std::vector<std::string> header = split_line(line);
    for (auto& h : header) h = trim(h);

    std::unordered_set<std::string> header_set;
    for (const auto& h : header) {
        if (!header_set.insert(h).second)
            throw input_error("csv: duplicated column name \"" + h + "\"");
    }
    auto col_index = [&](const std::string& name) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw input_error("csv: unknown column \"" + name + "\"");
        return static_cast<std::size_t>(it - header.begin());
    };

    std::unordered_set<std::string> roles_seen{role_spec.response};
    const std::size_t y_pos = col_index(role_spec.response);
    std::vector<std::size_t> src_cols;  // Z block then W block, positions in file
    std::vector<std::string> src_names;
    for (const auto& lists : {&role_spec.z, &role_spec.w}) {
        for (const auto& name : *lists) {
            if (!roles_seen.insert(name).second)
                throw input_error("csv: column \"" + name + "\" assigned to two roles");
            src_cols.push_back(col_index(name));
            src_names.push_back(name);
        }
    }

    std::vector<std::vector<std::string>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != header.size())
            throw input_error("csv: row " + std::to_string(lineno - 1) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(header.size()));
        rows.push_back(std::move(fields));
    }
    if (rows.size() < 4)
        throw input_error("csv: need at least 4 data rows, got " + std::to_string(rows.size()));

    Dataset data;
    data.y.resize(rows.size());
    data.x = Matrix(rows.size(), src_cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        data.y[i] = parse_cell(rows[i][y_pos], i + 1, role_spec.response);
        for (std::size_t j = 0; j < src_cols.size(); ++j)
            data.x(i, j) = parse_cell(rows[i][src_cols[j]], i + 1, src_names[j]);
    }
    for (std::size_t j = 0; j < role_spec.z.size(); ++j) data.z_cols.push_back(j);
    for (std::size_t j = role_spec.z.size(); j < src_cols.size(); ++j) data.w_cols.push_back(j);

    data.validate();
    return data;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw input_error("csv: cannot write file " + path.string());

    out << "y";
    for (std::size_t j = 0; j < data.p1(); ++j) out << ",z" << (j + 1);
    for (std::size_t j = 0; j < data.p2(); ++j) out << ",w" << (j + 1);
    out << "\n";

    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf;
    };
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        put(data.y[i]);
        for (std::size_t c : data.z_cols) {
            out << ",";
            put(data.x(i, c));
        }
        for (std::size_t c : data.w_cols) {
            out << ",";
            put(data.x(i, c));
        }
        out << "\n";
    }
}

SplitPlan make_split_exact(std::size_t n, std::size_t n1, std::uint64_t seed) {
    if (n1 < 1 || n1 >= n)
        throw degenerate_error("split: both halves must be nonempty (N=" + std::to_string(n) +
                               ", n1=" + std::to_string(n1) + ")");
    Rng rng(seed);
    std::vector<std::size_t> idx = rng.permutation(n);

    SplitPlan plan;
    plan.d1_idx.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n1));
    plan.d2_idx.assign(idx.begin() + static_cast<std::ptrdiff_t>(n1), idx.end());
    plan.xi = static_cast<double>(n1) / static_cast<double>(n);
    plan.seed = seed;
    return plan;
}

SplitPlan make_split(std::size_t n, double xi, std::uint64_t seed) {
    if (!(xi > 0.0 && xi < 1.0))
        throw input_error("split: xi must lie in (0,1), got " + std::to_string(xi));
    const auto n1 = static_cast<std::size_t>(std::floor(xi * static_cast<double>(n)));
    return make_split_exact(n, n1, seed);
}

Dataset permute_w(const Dataset& data, std::uint64_t seed) {
    if (data.p2() < 1) throw input_error("permute_w: W block is empty");
    Rng rng(seed);
    const std::vector<std::size_t> perm = rng.permutation(data.n_rows());

    Dataset out = data;
    for (std::size_t i = 0; i < data.n_rows(); ++i)
        for (std::size_t c : data.w_cols) out.x(i, c) = data.x(perm[i], c);
    return out;
}

} // namespace pmdep
