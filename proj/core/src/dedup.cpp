#include "forge/dedup.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

namespace forge {

namespace {

constexpr uint64_t kMersenne61 = (1ull << 61) - 1;

uint64_t mulmod61(uint64_t a, uint64_t b) {
  return static_cast<uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % kMersenne61);
}

struct HashFamily {
  std::vector<uint64_t> a, b;
  HashFamily(size_t k, uint64_t seed) {
    uint64_t sm = seed;
    a.reserve(k);
    b.reserve(k);
    for (size_t i = 0; i < k; ++i) {
      uint64_t ai = splitmix64(sm) % (kMersenne61 - 1) + 1;  // nonzero
      uint64_t bi = splitmix64(sm) % kMersenne61;
      a.push_back(ai);
      b.push_back(bi);
    }
  }
};

struct UnionFind {
  std::vector<size_t> parent;
  explicit UnionFind(size_t n) : parent(n) {
    for (size_t i = 0; i < n; ++i) parent[i] = i;
  }
  size_t find(size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(size_t x, size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (y < x) std::swap(x, y);  // smaller index wins the root
    parent[y] = x;
  }
};

// Composite Simpson with n (even) intervals.
template <typename F>
double simpson(F f, double lo, double hi, int n = 2048) {
  if (hi <= lo) return 0.0;
  const double h = (hi - lo) / n;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) sum += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace

std::pair<std::vector<Document>, uint64_t> exact_dedup(
    const std::vector<Document>& docs) {
  std::vector<Document> kept;
  kept.reserve(docs.size());
  std::unordered_set<std::string> seen;
  uint64_t dropped = 0;
  for (const auto& d : docs) {
    auto h = sha256(d.text);
    std::string key(reinterpret_cast<const char*>(h.data()), h.size());
    if (seen.insert(std::move(key)).second)
      kept.push_back(d);
    else
      ++dropped;
  }
  return {std::move(kept), dropped};
}

ShingleSet shingle_set(DocId id, const std::string& text, size_t w) {
  if (w < 1) throw ForgeError("shingle width must be >= 1");

  std::string lowered;
  lowered.reserve(text.size());
  for (char c : text)
    lowered.push_back(
        static_cast<char>(std::tolower(static_cast<unsigned char>(c))));

  std::vector<std::string_view> words;
  size_t i = 0;
  const std::string_view sv = lowered;
  while (i < sv.size()) {
    while (i < sv.size() && std::isspace(static_cast<unsigned char>(sv[i]))) ++i;
    size_t j = i;
    while (j < sv.size() && !std::isspace(static_cast<unsigned char>(sv[j]))) ++j;
    if (j > i) words.push_back(sv.substr(i, j - i));
    i = j;
  }
  if (words.empty()) throw ForgeError("empty document reached dedup");

  ShingleSet out;
  out.doc_id = id;
  out.w = w;
  auto hash_window = [&](size_t lo, size_t hi) {
    uint64_t h = kFnvOffset;
    for (size_t t = lo; t < hi; ++t) {
      h = fnv1a64(words[t], h);
      h ^= 0x1f;  // word separator
      h *= kFnvPrime;
    }
    return h;
  };
  if (words.size() < w) {
    out.shingles.push_back(hash_window(0, words.size()));
  } else {
    out.shingles.reserve(words.size() - w + 1);
    for (size_t s = 0; s + w <= words.size(); ++s)
      out.shingles.push_back(hash_window(s, s + w));
  }
  std::sort(out.shingles.begin(), out.shingles.end());
  out.shingles.erase(std::unique(out.shingles.begin(), out.shingles.end()),
                     out.shingles.end());
  return out;
}

ShingleSet shingle_set(const Document& doc, size_t w) {
  return shingle_set(doc.id, doc.text, w);
}

MinHashSignature minhash_sign(const ShingleSet& s, size_t k, uint64_t seed) {
  if (k < 1) throw ForgeError("k must be >= 1");
  if (s.shingles.empty()) throw ForgeError("empty shingle set");
  HashFamily fam(k, seed);
  MinHashSignature sig;
  sig.doc_id = s.doc_id;
  sig.k = k;
  sig.seed = seed;
  sig.values.assign(k, UINT64_MAX);
  for (uint64_t x : s.shingles) {
    const uint64_t xr = x % kMersenne61;
    for (size_t i = 0; i < k; ++i) {
      const uint64_t h = (mulmod61(fam.a[i], xr) + fam.b[i]) % kMersenne61;
      if (h < sig.values[i]) sig.values[i] = h;
    }
  }
  return sig;
}

double est_jaccard(const MinHashSignature& a, const MinHashSignature& b) {
  if (a.k != b.k || a.seed != b.seed)
    throw ForgeError("incomparable signatures");
  size_t eq = 0;
  for (size_t i = 0; i < a.k; ++i)
    if (a.values[i] == b.values[i]) ++eq;
  return static_cast<double>(eq) / static_cast<double>(a.k);
}

double exact_jaccard(const ShingleSet& a, const ShingleSet& b) {
  size_t i = 0, j = 0, inter = 0;
  while (i < a.shingles.size() && j < b.shingles.size()) {
    if (a.shingles[i] == b.shingles[j]) {
      ++inter;
      ++i;
      ++j;
    } else if (a.shingles[i] < b.shingles[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const size_t uni = a.shingles.size() + b.shingles.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::pair<size_t, size_t> choose_lsh_params(size_t k, double threshold) {
  if (k < 2) throw ForgeError("choose_lsh_params requires k >= 2");
  if (threshold <= 0.0 || threshold >= 1.0)
    throw ForgeError("threshold must be in (0, 1)");

  double best_obj = 0.0;
  size_t best_b = 0, best_r = 0;
  bool have = false;
  for (size_t r = 1; r <= k; ++r) {
    for (size_t b = 1; b * r <= k; ++b) {
      auto curve = [&](double s) {
        return 1.0 - std::pow(1.0 - std::pow(s, double(r)), double(b));
      };
      const double fp = simpson(curve, 0.0, threshold);
      const double fn =
          simpson([&](double s) { return 1.0 - curve(s); }, threshold, 1.0);
      const double obj = fp + fn;
      // ties (within quadrature noise): prefer larger b*r, then smaller r
      const double tol = 1e-9 * std::max(1.0, std::abs(best_obj));
      bool better;
      if (!have) {
        better = true;
      } else if (obj < best_obj - tol) {
        better = true;
      } else if (obj > best_obj + tol) {
        better = false;
      } else {
        better = (b * r > best_b * best_r) ||
                 (b * r == best_b * best_r && r < best_r);
      }
      if (better) {
        best_obj = obj;
        best_b = b;
        best_r = r;
        have = true;
      }
    }
  }
  return {best_b, best_r};
}

NearDedupResult near_dedup(const std::vector<Document>& docs,
                           const LshParams& params) {
  NearDedupResult res;
  const size_t n = docs.size();
  size_t b = params.bands, r = params.rows;
  if (b == 0 || r == 0) std::tie(b, r) = choose_lsh_params(params.k, params.threshold);
  if (b * r > params.k) throw ForgeError("bands * rows exceeds k");

  std::vector<ShingleSet> shingles;
  shingles.reserve(n);
  res.signatures.reserve(n);
  for (const auto& d : docs) {
    shingles.push_back(shingle_set(d, params.shingle_width));
    res.signatures.push_back(minhash_sign(shingles.back(), params.k, params.seed));
  }

  // banding: documents sharing any band bucket become candidates
  std::unordered_map<uint64_t, std::vector<size_t>> buckets;
  for (size_t i = 0; i < n; ++i) {
    for (size_t band = 0; band < b; ++band) {
      uint64_t h = fnv1a64_u64(band + 1);
      for (size_t row = 0; row < r; ++row)
        h = fnv1a64_u64(res.signatures[i].values[band * r + row], h);
      buckets[h].push_back(i);
    }
  }

  UnionFind uf(n);
  std::unordered_set<uint64_t> confirmed_pairs;
  for (auto& [key, members] : buckets) {
    if (members.size() < 2) continue;
    for (size_t x = 0; x < members.size(); ++x) {
      for (size_t y = x + 1; y < members.size(); ++y) {
        size_t i = std::min(members[x], members[y]);
        size_t j = std::max(members[x], members[y]);
        if (i == j) continue;
        const uint64_t pair_key = (uint64_t(i) << 32) | uint64_t(j);
        if (!confirmed_pairs.insert(pair_key).second) continue;
        if (est_jaccard(res.signatures[i], res.signatures[j]) >=
            params.threshold)
          uf.unite(i, j);
      }
    }
  }

  // group flagged documents into clusters
  std::unordered_map<size_t, std::vector<size_t>> groups;
  for (size_t i = 0; i < n; ++i) groups[uf.find(i)].push_back(i);

  std::vector<bool> keep(n, true);
  std::vector<size_t> roots;
  for (auto& [root, members] : groups)
    if (members.size() >= 2) roots.push_back(root);
  std::sort(roots.begin(), roots.end());

  for (size_t root : roots) {
    auto& members = groups[root];
    // canonical: longest text, ties by smallest id
    size_t canon = members[0];
    for (size_t idx : members) {
      if (docs[idx].text.size() > docs[canon].text.size() ||
          (docs[idx].text.size() == docs[canon].text.size() &&
           docs[idx].id < docs[canon].id))
        canon = idx;
    }
    DupCluster cluster;
    cluster.canonical = docs[canon].id;
    for (size_t idx : members) {
      cluster.members.push_back(docs[idx].id);
      if (idx != canon) {
        keep[idx] = false;
        ++res.near_dropped;
      }
    }
    std::sort(cluster.members.begin(), cluster.members.end());
    res.clusters.push_back(std::move(cluster));
  }

  res.kept.reserve(n - res.near_dropped);
  for (size_t i = 0; i < n; ++i)
    if (keep[i]) res.kept.push_back(docs[i]);
  return res;
}

void write_signatures(const std::filesystem::path& p,
                      const std::vector<MinHashSignature>& sigs) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ForgeError("cannot open for write: " + p.string());
  for (const auto& s : sigs) {
    out.write(reinterpret_cast<const char*>(s.doc_id.data()), 16);
    for (uint64_t v : s.values) {
      uint8_t le[8];
      for (int i = 0; i < 8; ++i) le[i] = (v >> (8 * i)) & 0xff;
      out.write(reinterpret_cast<const char*>(le), 8);
    }
  }
  if (!out) throw ForgeError("write failed: " + p.string());
}

std::vector<MinHashSignature> read_signatures(const std::filesystem::path& p,
                                              size_t k, uint64_t seed) {
  std::string data = read_file(p);
  const size_t rec = 16 + 8 * k;
  if (data.size() % rec != 0)
    throw ForgeError("signature file size is not a record multiple");
  std::vector<MinHashSignature> sigs;
  sigs.reserve(data.size() / rec);
  for (size_t off = 0; off < data.size(); off += rec) {
    MinHashSignature s;
    s.k = k;
    s.seed = seed;
    std::copy_n(reinterpret_cast<const uint8_t*>(data.data()) + off, 16,
                s.doc_id.begin());
    s.values.reserve(k);
    for (size_t i = 0; i < k; ++i) {
      uint64_t v = 0;
      for (int byte = 7; byte >= 0; --byte)
        v = (v << 8) |
            static_cast<uint8_t>(data[off + 16 + 8 * i + byte]);
      s.values.push_back(v);
    }
    sigs.push_back(std::move(s));
  }
  return sigs;
}

}  // namespace forge
