#pragma once

#include <cstddef>
#include <vector>

namespace efg {

// Append-only table stored in fixed-size chunks.  Growing it never moves
// existing elements, and no single allocation gets large enough for the
// allocator to hand it fresh pages on every copy.
template <typename T, std::size_t ChunkBits = 10> class ChunkedVector {
public:
  static constexpr std::size_t kChunk = std::size_t{1} << ChunkBits;

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  T &operator[](std::size_t i) { return chunks_[i >> ChunkBits][i & mask]; }
  const T &operator[](std::size_t i) const {
    return chunks_[i >> ChunkBits][i & mask];
  }

  T &emplace_back() {
    if (size_ % kChunk == 0) {
      chunks_.emplace_back();
      chunks_.back().reserve(kChunk);
    }
    ++size_;
    return chunks_.back().emplace_back();
  }

private:
  static constexpr std::size_t mask = kChunk - 1;
  std::vector<std::vector<T>> chunks_;
  std::size_t size_ = 0;
};

} // namespace efg
