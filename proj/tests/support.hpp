#pragma once

#include "tilework/integer_matrix.hpp"
#include "tilework/io.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <random>

namespace testing {

inline std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(TILEWORK_DATA_DIR) / name; }

inline tilework::RuleDocument load_valid(const std::string& name) {
    tilework::RuleDocument doc = tilework::load_rule(data_path(name));
    tilework::ValidationReport rep = tilework::validate_rule(doc.rule);
    if (!rep.valid) throw std::runtime_error(name + " did not validate");
    return doc;
}

inline const std::vector<std::string>& rule_files() {
    static const std::vector<std::string> files{"2dtm.rule", "ammann_beenker.rule", "chair.rule",
                                                "chair_octagon.rule", "square3.rule", "square5.rule"};
    return files;
}

// rule files that carry a recurrent pair
inline const std::vector<std::string>& pair_files() {
    static const std::vector<std::string> files{"2dtm.rule", "square3.rule"};
    return files;
}

// a == P b P^T for some permutation P, by backtracking over row images
inline bool permutation_equivalent(const Eigen::MatrixXi& a, const Eigen::MatrixXi& b) {
    const int n = static_cast<int>(a.rows());
    if (b.rows() != n || a.cols() != n || b.cols() != n) return false;
    std::vector<int> image(n, -1);
    std::vector<bool> used(n, false);
    auto sorted_row = [](const Eigen::MatrixXi& m, int r) {
        std::vector<int> v;
        for (int c = 0; c < m.cols(); ++c) v.push_back(m(r, c));
        std::sort(v.begin(), v.end());
        return v;
    };
    auto fits = [&](int i) {
        for (int j = 0; j <= i; ++j)
            if (a(i, j) != b(image[i], image[j]) || a(j, i) != b(image[j], image[i])) return false;
        return true;
    };
    std::function<bool(int)> place = [&](int i) {
        if (i == n) return true;
        for (int k = 0; k < n; ++k) {
            if (used[k] || a(i, i) != b(k, k) || sorted_row(a, i) != sorted_row(b, k)) continue;
            image[i] = k;
            used[k] = true;
            if (fits(i) && place(i + 1)) return true;
            used[k] = false;
        }
        image[i] = -1;
        return false;
    };
    return place(0);
}

// Invariant factors by plain row and column elimination, no transforms kept.
inline std::vector<tilework::Integer> naive_invariants(tilework::IntMatrix a) {
    std::vector<tilework::Integer> out;
    const Eigen::Index r = a.rows(), c = a.cols();
    for (Eigen::Index t = 0; t < std::min(r, c); ++t) {
        for (;;) {
            Eigen::Index pi = -1, pj = -1;
            for (Eigen::Index i = t; i < r; ++i)
                for (Eigen::Index j = t; j < c; ++j)
                    if (a(i, j) != 0 && (pi < 0 || tilework::mp::abs(a(i, j)) < tilework::mp::abs(a(pi, pj)))) pi = i, pj = j;
            if (pi < 0) return out;
            a.row(t).swap(a.row(pi));
            a.col(t).swap(a.col(pj));
            bool clean = true;
            for (Eigen::Index i = t + 1; i < r; ++i) {
                tilework::Integer q = a(i, t) / a(t, t);
                for (Eigen::Index j = t; j < c; ++j) a(i, j) -= q * a(t, j);
                if (a(i, t) != 0) clean = false;
            }
            for (Eigen::Index j = t + 1; j < c; ++j) {
                tilework::Integer q = a(t, j) / a(t, t);
                for (Eigen::Index i = t; i < r; ++i) a(i, j) -= q * a(i, t);
                if (a(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            for (Eigen::Index i = t + 1; i < r && clean; ++i)
                for (Eigen::Index j = t + 1; j < c && clean; ++j)
                    if (a(i, j) % a(t, t) != 0) {
                        for (Eigen::Index k = t; k < c; ++k) a(t, k) += a(i, k);
                        clean = false;
                    }
            if (!clean) continue;
            out.push_back(tilework::mp::abs(a(t, t)));
            break;
        }
    }
    return out;
}

// unimodular P and its inverse from random elementary operations
inline std::pair<tilework::IntMatrix, tilework::IntMatrix> random_unimodular(std::mt19937& rng, int n) {
    tilework::IntMatrix p = tilework::identity(n), q = tilework::identity(n);
    std::uniform_int_distribution<int> idx(0, n - 1), k(-2, 2);
    for (int step = 0; step < 3 * n; ++step) {
        int i = idx(rng), j = idx(rng), s = k(rng);
        if (i == j || s == 0) continue;
        // P <- E P with E = I + s e_ij, P^-1 <- P^-1 E^-1
        p.row(i) += tilework::Integer(s) * p.row(j);
        q.col(j) -= tilework::Integer(s) * q.col(i);
    }
    return {p, q};
}

}  // namespace testing
