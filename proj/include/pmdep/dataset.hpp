#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pmdep/matrix.hpp"

namespace pmdep {

// Response vector plus covariate matrix with a declared Z/W column split.
// Columns are normalized to (Z block, then W block) at load time, so
// z_cols/w_cols are contiguous after load_csv; datasets built directly may
// use any disjoint partition.
struct Dataset {
    std::vector<double> y;            // response, length N
    Matrix x;                         // covariates, N x p
    std::vector<std::size_t> z_cols;  // control block, dimension p1 (may be empty)
    std::vector<std::size_t> w_cols;  // tested block, dimension p2 >= 1

    std::size_t n_rows() const { return y.size(); }
    std::size_t p() const { return x.cols(); }
    std::size_t p1() const { return z_cols.size(); }
    std::size_t p2() const { return w_cols.size(); }

    // Enforces the structural invariants: disjoint Z/W covering all columns,
    // finite values, N >= 4. Throws input_error on violation.
    void validate() const;
};

// Deterministic, seeded partition of row indices into a fit half and an
// evaluation half.
struct SplitPlan {
    std::vector<std::size_t> d1_idx;  // fit half
    std::vector<std::size_t> d2_idx;  // evaluation half
    double xi = 0.0;                  // realized |d1|/N
    std::uint64_t seed = 0;
};

// Maps CSV header names to dataset roles.
struct RoleSpec {
    std::string response;
    std::vector<std::string> z;  // may be empty
    std::vector<std::string> w;  // at least one
};

// Parses a headered CSV into a Dataset with columns reordered to (Z, W).
// Errors identify the offending row/column.
Dataset load_csv(const std::filesystem::path& path, const RoleSpec& role_spec);

// Writes a Dataset as CSV with columns y, z1..zp1, w1..wp2, full double
// precision. load_csv of the output reproduces the dataset exactly.
void write_csv(const Dataset& data, const std::filesystem::path& path);

// Draws |d1| = floor(xi * N) fit indices as the head of a uniform seeded
// permutation of 0..N-1. Identical (N, xi, seed) yields identical plans.
SplitPlan make_split(std::size_t n, double xi, std::uint64_t seed);

// Same split mechanics with the fit-half size given directly (the pGMC
// estimator wants ceil(N/2) rather than the floor rule).
SplitPlan make_split_exact(std::size_t n, std::size_t n1, std::uint64_t seed);

// Returns a copy in which the rows of the W sub-matrix are jointly permuted
// by one uniform permutation; Z columns and y are untouched.
Dataset permute_w(const Dataset& data, std::uint64_t seed);

} // namespace pmdep
