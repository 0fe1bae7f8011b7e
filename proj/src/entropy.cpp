#include "ahc/entropy.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

#include "ahc/error.hpp"

namespace ahc {

namespace {

// Huffman depths for the given frequencies, unbounded.
CodeLengths huffman_lengths(const Frequencies& freqs) {
  struct Node {
    std::uint64_t freq;
    int order;  // leaves: symbol value; internal nodes: 256 + creation index
    int left = -1;
    int right = -1;
  };
  std::vector<Node> nodes;
  nodes.reserve(2 * kAlphabetSize);

  using Key = std::tuple<std::uint64_t, int, int>;  // (freq, order, node index)
  std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;
  for (int s = 0; s < kAlphabetSize; ++s) {
    if (freqs[s] == 0) continue;
    nodes.push_back({freqs[s], s});
    heap.emplace(freqs[s], s, static_cast<int>(nodes.size()) - 1);
  }

  CodeLengths lengths{};
  if (nodes.size() == 1) {
    lengths[nodes[0].order] = 1;
    return lengths;
  }

  int next_order = kAlphabetSize;
  while (heap.size() > 1) {
    const auto [fa, oa, ia] = heap.top();
    heap.pop();
    const auto [fb, ob, ib] = heap.top();
    heap.pop();
    nodes.push_back({fa + fb, next_order++, ia, ib});
    heap.emplace(fa + fb, nodes.back().order, static_cast<int>(nodes.size()) - 1);
  }

  // Iterative depth walk from the root.
  std::vector<std::pair<int, int>> stack = {{std::get<2>(heap.top()), 0}};
  while (!stack.empty()) {
    const auto [idx, depth] = stack.back();
    stack.pop_back();
    const Node& n = nodes[idx];
    if (n.left < 0) {
      lengths[n.order] = static_cast<std::uint8_t>(std::min(depth, 255));
    } else {
      stack.emplace_back(n.left, depth + 1);
      stack.emplace_back(n.right, depth + 1);
    }
  }
  return lengths;
}

}  // namespace

Frequencies histogram(std::span<const std::uint8_t> symbols) {
  Frequencies f{};
  for (auto s : symbols) ++f[s];
  return f;
}

CodeTable CodeTable::from_lengths(const CodeLengths& lengths) {
  CodeTable t;
  t.lengths_ = lengths;
  for (int s = 0; s < kAlphabetSize; ++s) {
    const int len = lengths[s];
    if (len == 0) continue;
    if (len > kMaxCodeLength) {
      throw Error(ErrorCode::invalid_code_lengths, "code length exceeds 32 bits");
    }
    t.sorted_.push_back(static_cast<std::uint8_t>(s));
    ++t.count_[len];
    t.max_length_ = std::max(t.max_length_, len);
  }
  if (t.sorted_.empty()) throw Error(ErrorCode::invalid_code_lengths, "code table has no symbols");
  if (t.kraft_numerator() > (std::uint64_t{1} << kMaxCodeLength)) {
    throw Error(ErrorCode::invalid_code_lengths, "code lengths violate the Kraft inequality");
  }
  std::stable_sort(t.sorted_.begin(), t.sorted_.end(),
                   [&](std::uint8_t a, std::uint8_t b) { return lengths[a] < lengths[b]; });

  std::uint64_t code = 0;
  std::uint32_t index = 0;
  for (int len = 1; len <= kMaxCodeLength; ++len) {
    t.first_code_[len] = static_cast<std::uint32_t>(code);
    t.first_index_[len] = index;
    code = (code + t.count_[len]) << 1;
    index += t.count_[len];
  }
  std::array<std::uint32_t, kMaxCodeLength + 1> next = t.first_code_;
  for (auto s : t.sorted_) t.codes_[s] = next[lengths[s]]++;
  return t;
}

std::uint64_t CodeTable::kraft_numerator() const {
  std::uint64_t sum = 0;
  for (auto len : lengths_) {
    if (len != 0 && len <= kMaxCodeLength) sum += std::uint64_t{1} << (kMaxCodeLength - len);
  }
  return sum;
}

CodeTable build_code(const Frequencies& freqs) {
  if (std::all_of(freqs.begin(), freqs.end(), [](std::uint64_t f) { return f == 0; })) {
    throw Error(ErrorCode::invalid_argument, "cannot build a code without symbols");
  }
  Frequencies f = freqs;
  for (;;) {
    const CodeLengths lengths = huffman_lengths(f);
    if (*std::max_element(lengths.begin(), lengths.end()) <= kMaxCodeLength) {
      return CodeTable::from_lengths(lengths);
    }
    for (auto& x : f) {
      if (x != 0) x = (x + 1) / 2;
    }
  }
}

EncodedBits encode(std::span<const std::uint8_t> symbols, const CodeTable& table) {
  BitWriter out;
  for (auto s : symbols) {
    const int len = table.length(s);
    if (len == 0) throw Error(ErrorCode::invalid_argument, "symbol missing from code table");
    out.put(table.code(s), len);
  }
  EncodedBits bits;
  bits.bit_count = out.bit_count();
  bits.bytes = out.take();
  return bits;
}

std::vector<std::uint8_t> decode(std::span<const std::uint8_t> bytes, std::uint64_t bit_count,
                                 const CodeTable& table, std::size_t n) {
  BitReader in(bytes, bit_count);
  // Every codeword is at least one bit long.
  if (n > bit_count) throw Error(ErrorCode::corrupt_stream, "too few bits for the symbol count");
  std::vector<std::uint8_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(table.decode_one(in));
  return out;
}

}  // namespace ahc
