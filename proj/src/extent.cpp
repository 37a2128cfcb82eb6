#include "flexi/extent.hpp"

#include <algorithm>
#include <string>

#include "flexi/error.hpp"

namespace flexi {

Extent::Extent(std::size_t universe, bool full)
    : words_((universe + 63) / 64, full ? ~std::uint64_t{0} : 0), universe_(universe) {
  if (full && universe % 64 != 0) {
    words_.back() = (std::uint64_t{1} << (universe % 64)) - 1;
  }
  count_ = full ? universe : 0;
}

Extent Extent::from_rows(std::size_t universe, std::span<const std::uint32_t> rows) {
  Extent extent(universe);
  for (const auto row : rows) extent.insert(row);
  return extent;
}

void Extent::insert(std::size_t row) {
  if (row >= universe_) {
    throw Error(ErrorCode::invariant,
                "row " + std::to_string(row) + " outside extent universe " + std::to_string(universe_));
  }
  auto& word = words_[row >> 6];
  const std::uint64_t mask = std::uint64_t{1} << (row & 63);
  if ((word & mask) == 0) {
    word |= mask;
    ++count_;
  }
}

Extent Extent::operator&(const Extent& other) const {
  if (universe_ != other.universe_) throw Error(ErrorCode::invariant, "extent universes differ");
  Extent out(universe_);
  for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] = words_[w] & other.words_[w];
  out.recount();
  return out;
}

Extent Extent::operator|(const Extent& other) const {
  if (universe_ != other.universe_) throw Error(ErrorCode::invariant, "extent universes differ");
  Extent out(universe_);
  for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] = words_[w] | other.words_[w];
  out.recount();
  return out;
}

bool Extent::intersects(const Extent& other) const {
  const std::size_t n = std::min(words_.size(), other.words_.size());
  for (std::size_t w = 0; w < n; ++w) {
    if ((words_[w] & other.words_[w]) != 0) return true;
  }
  return false;
}

bool Extent::is_subset_of(const Extent& other) const {
  if (universe_ != other.universe_) return false;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if ((words_[w] & ~other.words_[w]) != 0) return false;
  }
  return true;
}

std::vector<std::uint32_t> Extent::rows() const {
  std::vector<std::uint32_t> out;
  out.reserve(count_);
  for_each([&](std::uint32_t row) { out.push_back(row); });
  return out;
}

void Extent::recount() noexcept {
  count_ = 0;
  for (const auto word : words_) count_ += static_cast<std::size_t>(std::popcount(word));
}

}  // namespace flexi
