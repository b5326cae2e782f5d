#pragma once

// Synthetic datasets, random trees and the hand-built sales-tree fixture.

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "chaid/dataset.hpp"
#include "chaid/schema.hpp"
#include "chaid/tree.hpp"

namespace chaid::testing {

// One predictor (returned through `predictive`) fixes the target exactly;
// three others are independent uniform noise. Category counts, scales and
// the class mapping vary with the seed.
Dataset predictive_dataset(std::uint64_t seed, std::size_t rows,
                           std::size_t* predictive = nullptr);

// Every predictor drawn independently of the target.
Dataset noise_dataset(std::uint64_t seed, std::size_t rows);

// Full factorial design repeated `copies` times: every predictor/target
// margin is exactly uniform, so every chi-squared statistic is 0.
Dataset balanced_factorial_dataset(int copies);

// A structurally valid tree with random shape and counts.
Tree random_tree(std::mt19937_64& rng);

// Listing-style CSV with 8 predictors (numeric and categorical) and a target
// "sold" driven by two of them plus noise.
DatasetSchema listing_schema();
std::string listing_csv(std::uint64_t seed, std::size_t rows);

// The 11-node sales tree from the terminal-node table, splitting on views
// interval at the root. Interval boundaries and leaf counts are fixture data.
Tree sales_fixture();
// Table terminal number (1..7) -> node id in sales_fixture().
const std::map<int, int>& sales_fixture_terminals();

}  // namespace chaid::testing
