#include "mrc/codec/huffman.hpp"

#include <algorithm>
#include <cstring>
#include <queue>
#include <string>
#include <unordered_map>

#include "mrc/codec/quantizer.hpp"
#include "mrc/error.hpp"

namespace mrc {

namespace {

constexpr std::uint32_t kAlphabet = 2 * kCodeCap + 2;

std::uint32_t to_symbol(std::int32_t code) {
  if (code < -kCodeCap || code > kLiteralMarker) throw DataError("code outside the quantizer range");
  return static_cast<std::uint32_t>(code + kCodeCap);
}

std::int32_t from_symbol(std::uint32_t s) { return static_cast<std::int32_t>(s) - kCodeCap; }

// Depth of each leaf; ties broken by node id so the tree is deterministic.
std::vector<unsigned> huffman_depths(const std::vector<std::uint64_t>& weights) {
  const std::size_t n = weights.size();
  if (n == 1) return {1};
  struct Node {
    std::uint64_t weight;
    std::size_t id;
  };
  auto greater = [](const Node& a, const Node& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.id > b.id;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(greater)> heap(greater);
  std::vector<std::size_t> parent(2 * n - 1, 0);
  for (std::size_t i = 0; i < n; ++i) heap.push({weights[i], i});
  std::size_t next = n;
  while (heap.size() > 1) {
    const Node a = heap.top();
    heap.pop();
    const Node b = heap.top();
    heap.pop();
    parent[a.id] = next;
    parent[b.id] = next;
    heap.push({a.weight + b.weight, next});
    ++next;
  }
  // Internal nodes are created after their children, so walk ids downward.
  std::vector<unsigned> depth(2 * n - 1, 0);
  for (std::size_t id = 2 * n - 2; id-- > 0;) depth[id] = depth[parent[id]] + 1;
  return {depth.begin(), depth.begin() + static_cast<std::ptrdiff_t>(n)};
}

struct Canonical {
  std::vector<std::uint32_t> symbols;  // in canonical order
  std::vector<std::uint64_t> first_code;
  std::vector<std::uint32_t> first_index;
  std::vector<std::uint32_t> count;
  std::unordered_map<std::uint32_t, std::pair<std::uint64_t, unsigned>> codes;
};

Canonical canonicalize(const HuffmanTable& t, bool want_codes) {
  Canonical c;
  c.first_code.assign(kMaxCodeLength + 2, 0);
  c.first_index.assign(kMaxCodeLength + 2, 0);
  c.count.assign(kMaxCodeLength + 2, 0);
  unsigned prev_len = 0;
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    const auto& e = t.entries[i];
    if (e.length == 0 || e.length > kMaxCodeLength) throw FormatError("invalid Huffman code length");
    if (e.length < prev_len) throw FormatError("Huffman table is not in canonical order");
    prev_len = e.length;
    c.count[e.length]++;
    c.symbols.push_back(e.symbol);
  }
  std::uint64_t code = 0;
  std::uint32_t index = 0;
  for (unsigned len = 1; len <= kMaxCodeLength; ++len) {
    code <<= 1;
    c.first_code[len] = code;
    c.first_index[len] = index;
    code += c.count[len];
    index += c.count[len];
    if (code > (std::uint64_t{1} << len)) throw FormatError("Huffman table oversubscribed");
  }
  if (want_codes) {
    for (unsigned len = 1; len <= kMaxCodeLength; ++len)
      for (std::uint32_t k = 0; k < c.count[len]; ++k)
        c.codes[c.symbols[c.first_index[len] + k]] = {c.first_code[len] + k, len};
  }
  return c;
}

class BitWriter {
 public:
  void put(std::uint64_t code, unsigned len) {
    for (unsigned i = len; i-- > 0;) {
      acc_ = static_cast<std::uint8_t>((acc_ << 1) | ((code >> i) & 1u));
      if (++fill_ == 8) {
        bytes_.push_back(acc_);
        acc_ = 0;
        fill_ = 0;
      }
    }
    bits_ += len;
  }
  std::vector<std::uint8_t> finish() {
    if (fill_) bytes_.push_back(static_cast<std::uint8_t>(acc_ << (8 - fill_)));
    fill_ = 0;
    return std::move(bytes_);
  }
  std::uint64_t bits() const { return bits_; }

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint8_t acc_ = 0;
  unsigned fill_ = 0;
  std::uint64_t bits_ = 0;
};

}  // namespace

void HuffmanTable::write(ByteWriter& w) const {
  w.u32(static_cast<std::uint32_t>(entries.size()));
  for (const Entry& e : entries) {
    w.u32(e.symbol);
    w.u8(e.length);
  }
}

HuffmanTable HuffmanTable::read(ByteReader& r) {
  const std::uint32_t n = r.u32();
  if (n > kAlphabet) throw FormatError("Huffman table larger than the code alphabet");
  HuffmanTable t;
  t.entries.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t s = r.u32();
    const std::uint8_t len = r.u8();
    if (s >= kAlphabet) throw FormatError("Huffman symbol outside the alphabet");
    t.entries.push_back({s, len});
  }
  return t;
}

HuffmanTable build_huffman_table(const std::vector<std::pair<std::uint32_t, std::uint64_t>>& freqs) {
  std::vector<std::uint32_t> symbols;
  std::vector<std::uint64_t> weights;
  for (const auto& [s, f] : freqs) {
    if (f == 0) continue;
    symbols.push_back(s);
    weights.push_back(f);
  }
  HuffmanTable t;
  if (symbols.empty()) return t;

  std::vector<unsigned> depth = huffman_depths(weights);
  while (*std::max_element(depth.begin(), depth.end()) > kMaxCodeLength) {
    for (auto& w : weights) w = (w >> 1) | 1;
    depth = huffman_depths(weights);
  }
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    t.entries.push_back({symbols[i], static_cast<std::uint8_t>(depth[i])});
  }
  std::sort(t.entries.begin(), t.entries.end(), [](const auto& a, const auto& b) {
    return a.length != b.length ? a.length < b.length : a.symbol < b.symbol;
  });
  return t;
}

EntropyCoded entropy_encode(std::span<const std::int32_t> codes, std::span<const double> literals,
                            LosslessKind pass) {
  std::vector<std::uint64_t> hist(kAlphabet, 0);
  std::uint64_t markers = 0;
  for (const std::int32_t c : codes) {
    hist[to_symbol(c)]++;
    markers += c == kLiteralMarker;
  }
  if (markers != literals.size()) throw DataError("literal count does not match escape codes");

  std::vector<std::pair<std::uint32_t, std::uint64_t>> freqs;
  for (std::uint32_t s = 0; s < kAlphabet; ++s)
    if (hist[s]) freqs.emplace_back(s, hist[s]);

  EntropyCoded out;
  out.literal_count = literals.size();
  out.table = build_huffman_table(freqs);
  const Canonical canon = canonicalize(out.table, true);

  // A one-symbol alphabet is implied by the table alone and costs no bits.
  BitWriter bits;
  if (out.table.entries.size() == 1) codes = {};
  for (const std::int32_t c : codes) {
    const auto& [code, len] = canon.codes.at(to_symbol(c));
    bits.put(code, len);
  }
  ByteWriter body;
  body.u64(bits.bits());
  body.bytes(bits.finish());
  for (const double v : literals) body.f64(v);

  const std::vector<std::uint8_t> packed = lossless_encode(pass, body.buffer());
  out.payload.reserve(packed.size() + 1);
  out.payload.push_back(static_cast<std::uint8_t>(pass));
  out.payload.insert(out.payload.end(), packed.begin(), packed.end());
  return out;
}

EntropyDecoded entropy_decode(const EntropyCoded& coded, std::size_t code_count) {
  if (coded.payload.empty()) throw FormatError("empty entropy payload");
  const auto pass_id = coded.payload.front();
  if (pass_id > static_cast<std::uint8_t>(LosslessKind::zlib)) throw FormatError("unknown lossless pass id");
  const std::vector<std::uint8_t> body = lossless_decode(
      static_cast<LosslessKind>(pass_id), std::span(coded.payload).subspan(1));

  ByteReader r(body);
  const std::uint64_t nbits = r.u64();
  const auto bitbytes = r.bytes((nbits + 7) / 8);
  if (coded.literal_count > r.remaining() / 8 || r.remaining() != coded.literal_count * 8) {
    throw FormatError("literal section size mismatch");
  }

  EntropyDecoded out;
  out.codes.resize(code_count);
  if (code_count > 0) {
    if (coded.table.entries.empty()) throw FormatError("missing Huffman table");
    const Canonical canon = canonicalize(coded.table, false);
    if (coded.table.entries.size() == 1) {
      if (nbits != 0) throw FormatError("unexpected Huffman bits for a one-symbol table");
      std::fill(out.codes.begin(), out.codes.end(), from_symbol(coded.table.entries.front().symbol));
    }
    std::uint64_t pos = 0;
    for (std::size_t i = 0; i < code_count && coded.table.entries.size() > 1; ++i) {
      std::uint64_t code = 0;
      unsigned len = 0;
      for (;;) {
        if (pos >= nbits) throw FormatError("Huffman stream truncated");
        code = (code << 1) | ((bitbytes[pos >> 3] >> (7 - (pos & 7))) & 1u);
        ++pos;
        ++len;
        if (len > kMaxCodeLength) throw FormatError("invalid Huffman code");
        const std::uint64_t offset = code - canon.first_code[len];
        if (code >= canon.first_code[len] && offset < canon.count[len]) {
          out.codes[i] = from_symbol(canon.symbols[canon.first_index[len] + offset]);
          break;
        }
      }
    }
    if (pos != nbits) throw FormatError("trailing bits in Huffman stream");
  } else if (nbits != 0) {
    throw FormatError("unexpected Huffman bits");
  }

  const auto markers = static_cast<std::uint64_t>(std::count(out.codes.begin(), out.codes.end(), kLiteralMarker));
  if (markers != coded.literal_count) throw FormatError("literal count does not match escape codes");
  out.literals.resize(coded.literal_count);
  for (auto& v : out.literals) v = r.f64();
  return out;
}

}  // namespace mrc
