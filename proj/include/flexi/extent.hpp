#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace flexi {

/// Set of row indices over a dataset of `universe()` rows, stored as a bitset.
class Extent {
 public:
  Extent() = default;
  explicit Extent(std::size_t universe, bool full = false);

  static Extent from_rows(std::size_t universe, std::span<const std::uint32_t> rows);

  [[nodiscard]] std::size_t universe() const noexcept { return universe_; }
  [[nodiscard]] std::size_t size() const noexcept { return count_; }
  [[nodiscard]] bool empty() const noexcept { return count_ == 0; }

  [[nodiscard]] bool contains(std::size_t row) const noexcept {
    return row < universe_ && ((words_[row >> 6] >> (row & 63)) & 1U) != 0;
  }
  void insert(std::size_t row);

  [[nodiscard]] Extent operator&(const Extent& other) const;
  [[nodiscard]] Extent operator|(const Extent& other) const;
  [[nodiscard]] bool intersects(const Extent& other) const;
  [[nodiscard]] bool is_subset_of(const Extent& other) const;

  [[nodiscard]] std::vector<std::uint32_t> rows() const;

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int bit = std::countr_zero(bits);
        f(static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(bit)));
        bits &= bits - 1;
      }
    }
  }

  friend bool operator==(const Extent& a, const Extent& b) noexcept {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

 private:
  void recount() noexcept;

  std::vector<std::uint64_t> words_;
  std::size_t universe_ = 0;
  std::size_t count_ = 0;
};

}  // namespace flexi
