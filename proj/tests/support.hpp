#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mfh/mf_data.hpp"

namespace testing_support {

/// Random dataset: hf ~ N(0,1), lf ~ N(0,1), labels y1..yK.
inline mfh::MFDataset random_dataset(int m, int T, int K, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    Eigen::VectorXd hf(T * m);
    for (auto& v : hf) v = n01(rng);
    Eigen::MatrixXd lf(T, K);
    for (Eigen::Index r = 0; r < T; ++r)
        for (Eigen::Index c = 0; c < K; ++c) lf(r, c) = n01(rng);
    std::vector<std::string> labels;
    for (int k = 0; k < K; ++k) labels.push_back("y" + std::to_string(k + 1));
    return mfh::MFDataset(hf, lf, m, labels);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("mfh_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    Eigen::MatrixXd M(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) M(i, j) = n01(rng);
    return M;
}

}  // namespace testing_support
