#pragma once

// Test-only oracles, kept independent of the library implementation paths
// they check.

#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace oracles {

// Minimum edit cost by memoized top-down recursion over all alignments.
// Deliberately structured differently from the library's iterative matrix +
// backtrace; unit costs for substitution, deletion and insertion.
inline std::size_t edit_cost(const std::vector<std::string>& ref,
                             const std::vector<std::string>& hyp) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;

  auto solve = [&](auto&& self, std::size_t i, std::size_t j) -> std::size_t {
    if (i == 0) return j;
    if (j == 0) return i;
    const auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    std::size_t best = self(self, i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
    best = std::min(best, self(self, i - 1, j) + 1);
    best = std::min(best, self(self, i, j - 1) + 1);
    memo.emplace(key, best);
    return best;
  };
  return solve(solve, ref.size(), hyp.size());
}

// Random token list over a small alphabet, for property tests.
inline std::vector<std::string> random_tokens(std::mt19937& rng, std::size_t max_len,
                                              std::size_t alphabet) {
  std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
  std::uniform_int_distribution<int> tok_dist(0, static_cast<int>(alphabet) - 1);
  std::vector<std::string> tokens(len_dist(rng));
  for (auto& t : tokens) t = std::string(1, static_cast<char>('a' + tok_dist(rng)));
  return tokens;
}

}  // namespace oracles
