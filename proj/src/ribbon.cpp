#include "ribbonvol/ribbon.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace ribbonvol {

namespace {

bool is_permutation_of_range(const Perm& p) {
  std::vector<char> seen(p.size(), 0);
  for (int x : p) {
    if (x < 0 || x >= static_cast<int>(p.size()) || seen[x]) return false;
    seen[x] = 1;
  }
  return true;
}

std::vector<std::vector<int>> orbits_of(const Perm& p) {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(p.size(), 0);
  for (int d = 0; d < static_cast<int>(p.size()); ++d) {
    if (seen[d]) continue;
    std::vector<int> orb;
    for (int x = d; !seen[x]; x = p[x]) {
      seen[x] = 1;
      orb.push_back(x);
    }
    out.push_back(std::move(orb));
  }
  return out;
}

}  // namespace

RibbonGraph::RibbonGraph(Perm sigma, std::vector<int> labels_by_dart)
    : sigma_(std::move(sigma)) {
  validate_and_index(std::move(labels_by_dart));
}

void RibbonGraph::validate_and_index(std::vector<int> labels_by_dart) {
  const int D = darts();
  if (D == 0 || D % 2 != 0) throw std::invalid_argument("dart count must be even and positive");
  if (!is_permutation_of_range(sigma_)) throw std::invalid_argument("sigma is not a permutation");
  if (static_cast<int>(labels_by_dart.size()) != D)
    throw std::invalid_argument("labels_by_dart size mismatch");

  // connectivity under <sigma, iota>
  {
    std::vector<char> seen(D, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int cnt = 1;
    while (!stack.empty()) {
      int d = stack.back();
      stack.pop_back();
      for (int nb : {sigma_[d], d ^ 1}) {
        if (!seen[nb]) {
          seen[nb] = 1;
          ++cnt;
          stack.push_back(nb);
        }
      }
    }
    if (cnt != D) throw std::invalid_argument("ribbon graph is not connected");
  }

  vertex_cycles_ = orbits_of(sigma_);
  Perm phi(D);
  for (int d = 0; d < D; ++d) phi[d] = sigma_[d] ^ 1;
  face_cycles_ = orbits_of(phi);

  vertex_of_.assign(D, -1);
  for (int v = 0; v < static_cast<int>(vertex_cycles_.size()); ++v)
    for (int d : vertex_cycles_[v]) vertex_of_[d] = v;
  face_of_.assign(D, -1);
  for (int f = 0; f < static_cast<int>(face_cycles_.size()); ++f)
    for (int d : face_cycles_[f]) face_of_[d] = f;

  const int chi = num_vertices() - num_edges() + num_faces();
  if (chi % 2 != 0 || chi > 2) throw std::invalid_argument("Euler characteristic not of form 2-2g");
  genus_ = (2 - chi) / 2;

  // labels: constant on orbits, bijective onto 1..F
  const int F = num_faces();
  orbit_labels_.assign(F, 0);
  for (int f = 0; f < F; ++f) {
    int lab = labels_by_dart[face_cycles_[f][0]];
    for (int d : face_cycles_[f])
      if (labels_by_dart[d] != lab)
        throw std::invalid_argument("face label not constant on a face orbit");
    orbit_labels_[f] = lab;
  }
  std::vector<char> used(F + 1, 0);
  for (int lab : orbit_labels_) {
    if (lab < 1 || lab > F || used[lab])
      throw std::invalid_argument("face labels must be a bijection onto 1..n");
    used[lab] = 1;
  }
}

RibbonGraph RibbonGraph::from_permutations(const Perm& sigma, const Perm& iota,
                                           const std::vector<int>& labels_by_dart) {
  const int D = static_cast<int>(sigma.size());
  if (static_cast<int>(iota.size()) != D) throw std::invalid_argument("sigma/iota size mismatch");
  if (!is_permutation_of_range(iota)) throw std::invalid_argument("iota is not a permutation");
  for (int d = 0; d < D; ++d)
    if (iota[d] == d || iota[iota[d]] != d)
      throw std::invalid_argument("iota is not a fixed-point-free involution");

  // renumber darts so that the pairing becomes d <-> d^1
  std::vector<int> newid(D, -1);
  int next = 0;
  for (int d = 0; d < D; ++d) {
    if (newid[d] >= 0) continue;
    newid[d] = next++;
    newid[iota[d]] = next++;
  }
  Perm s2(D);
  std::vector<int> lab2(D);
  for (int d = 0; d < D; ++d) {
    s2[newid[d]] = newid[sigma[d]];
    lab2[newid[d]] = labels_by_dart[d];
  }
  return RibbonGraph(std::move(s2), std::move(lab2));
}

int RibbonGraph::orbit_of_label(int label) const {
  for (int f = 0; f < num_faces(); ++f)
    if (orbit_labels_[f] == label) return f;
  throw std::invalid_argument("no face with that label");
}

bool RibbonGraph::is_trivalent() const {
  for (const auto& vc : vertex_cycles_)
    if (vc.size() != 3) return false;
  return true;
}

bool RibbonGraph::is_reduced() const {
  for (const auto& vc : vertex_cycles_)
    if (vc.size() < 3) return false;
  return true;
}

int RibbonGraph::face_edge_multiplicity(int label, int edge) const {
  int m = 0;
  for (int d : {2 * edge, 2 * edge + 1})
    if (label_of_dart(d) == label) ++m;
  return m;
}

std::vector<std::vector<int>> RibbonGraph::incidence_matrix() const {
  std::vector<std::vector<int>> a(num_faces(), std::vector<int>(num_edges(), 0));
  for (int d = 0; d < darts(); ++d) a[label_of_dart(d) - 1][edge_of(d)] += 1;
  return a;
}

std::vector<Rat> RibbonGraph::boundary_lengths(const std::vector<Rat>& len) const {
  if (static_cast<int>(len.size()) != num_edges())
    throw std::invalid_argument("length vector size mismatch");
  std::vector<Rat> L(num_faces(), Rat(0));
  for (int d = 0; d < darts(); ++d) L[label_of_dart(d) - 1] += len[edge_of(d)];
  return L;
}

std::vector<int> RibbonGraph::canonical_encoding(bool with_labels) const {
  const int D = darts();
  std::vector<int> best;
  std::vector<int> idx(D), inv(D);
  for (int start = 0; start < D; ++start) {
    std::fill(idx.begin(), idx.end(), -1);
    idx[start] = 0;
    inv[0] = start;
    int next = 1;
    for (int i = 0; i < D; ++i) {
      int d = inv[i];
      for (int nb : {sigma_[d], d ^ 1}) {
        if (idx[nb] < 0) {
          idx[nb] = next;
          inv[next] = nb;
          ++next;
        }
      }
    }
    std::vector<int> enc;
    enc.reserve((with_labels ? 3 : 2) * D);
    for (int i = 0; i < D; ++i) enc.push_back(idx[sigma_[inv[i]]]);
    for (int i = 0; i < D; ++i) enc.push_back(idx[inv[i] ^ 1]);
    if (with_labels)
      for (int i = 0; i < D; ++i) enc.push_back(label_of_dart(inv[i]));
    if (best.empty() || enc < best) best = std::move(enc);
  }
  return best;
}

bool RibbonGraph::isomorphic(const RibbonGraph& other, bool with_labels) const {
  if (darts() != other.darts() || num_faces() != other.num_faces() || genus_ != other.genus_)
    return false;
  return canonical_encoding(with_labels) == other.canonical_encoding(with_labels);
}

RibbonGraph::AutGroup RibbonGraph::automorphism_group(bool respect_labels) const {
  const int D = darts();
  AutGroup g;
  std::vector<int> f(D);
  for (int img = 0; img < D; ++img) {
    // an automorphism commutes with sigma and iota, so it is pinned by the
    // image of dart 0; propagate and check consistency
    std::fill(f.begin(), f.end(), -1);
    f[0] = img;
    std::vector<int> stack{0};
    bool ok = true;
    while (ok && !stack.empty()) {
      int d = stack.back();
      stack.pop_back();
      const int pairs[2][2] = {{sigma_[d], sigma_[f[d]]}, {d ^ 1, f[d] ^ 1}};
      for (auto& pr : pairs) {
        int src = pr[0], dst = pr[1];
        if (f[src] < 0) {
          f[src] = dst;
          stack.push_back(src);
        } else if (f[src] != dst) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    if (respect_labels) {
      for (int d = 0; d < D && ok; ++d)
        if (label_of_dart(d) != label_of_dart(f[d])) ok = false;
      if (!ok) continue;
    }
    Perm ea(num_edges());
    for (int e = 0; e < num_edges(); ++e) ea[e] = edge_of(f[2 * e]);
    g.elements.push_back(f);
    g.edge_actions.push_back(std::move(ea));
  }
  g.order = static_cast<long>(g.elements.size());
  return g;
}

std::pair<int, int> graph_type(const RibbonGraph& G) {
  return {G.genus(), G.boundaries()};
}

std::vector<SurfaceComponent> restrict_graph(const RibbonGraph& G,
                                             const std::vector<int>& edge_subset) {
  if (edge_subset.empty()) throw std::invalid_argument("restriction to empty edge set");
  std::vector<char> keep_edge(G.num_edges(), 0);
  for (int e : edge_subset) {
    if (e < 0 || e >= G.num_edges()) throw std::invalid_argument("edge id out of range");
    keep_edge[e] = 1;
  }
  const int D = G.darts();
  std::vector<char> keep(D, 0);
  for (int d = 0; d < D; ++d) keep[d] = keep_edge[RibbonGraph::edge_of(d)];

  // induced rotation: skip deleted darts around each vertex
  std::vector<int> s2(D, -1);
  for (int d = 0; d < D; ++d) {
    if (!keep[d]) continue;
    int x = G.sigma_at(d);
    while (!keep[x]) x = G.sigma_at(x);
    s2[d] = x;
  }

  // split into components under <s2, iota>
  std::vector<int> comp(D, -1);
  int ncomp = 0;
  for (int d = 0; d < D; ++d) {
    if (!keep[d] || comp[d] >= 0) continue;
    std::vector<int> stack{d};
    comp[d] = ncomp;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int nb : {s2[x], x ^ 1}) {
        if (comp[nb] < 0) {
          comp[nb] = ncomp;
          stack.push_back(nb);
        }
      }
    }
    ++ncomp;
  }

  std::vector<SurfaceComponent> out;
  for (int c = 0; c < ncomp; ++c) {
    std::vector<int> darts_in;
    for (int d = 0; d < D; ++d)
      if (keep[d] && comp[d] == c) darts_in.push_back(d);
    std::vector<int> local(D, -1);
    for (int i = 0; i < static_cast<int>(darts_in.size()); ++i) local[darts_in[i]] = i;
    Perm sl(darts_in.size()), il(darts_in.size());
    for (int i = 0; i < static_cast<int>(darts_in.size()); ++i) {
      sl[i] = local[s2[darts_in[i]]];
      il[i] = local[darts_in[i] ^ 1];
    }
    // label faces 1..F_c in orbit discovery order
    Perm phi(sl.size());
    for (size_t i = 0; i < sl.size(); ++i) phi[i] = il[sl[i]];
    std::vector<int> lab(sl.size(), 0);
    int nf = 0;
    for (size_t i = 0; i < phi.size(); ++i) {
      if (lab[i]) continue;
      ++nf;
      for (int x = static_cast<int>(i); !lab[x]; x = phi[x]) lab[x] = nf;
    }
    SurfaceComponent sc{0, 0, 0, 0, RibbonGraph::from_permutations(sl, il, lab), {}};
    sc.genus = sc.graph.genus();
    sc.boundaries = sc.graph.boundaries();
    for (int v = 0; v < sc.graph.num_vertices(); ++v) {
      if (sc.graph.valency(v) == 2) ++sc.bivalent;
      if (sc.graph.valency(v) == 1) ++sc.univalent;
    }
    std::set<int> eids;
    for (int d : darts_in) eids.insert(RibbonGraph::edge_of(d));
    sc.edge_ids.assign(eids.begin(), eids.end());
    out.push_back(std::move(sc));
  }
  std::sort(out.begin(), out.end(), [](const SurfaceComponent& a, const SurfaceComponent& b) {
    return a.edge_ids < b.edge_ids;
  });
  return out;
}

namespace {

// Generation of connected ribbon graphs by gluing stubs: vertices are created
// with a fixed valency, entered through their slot 0; the smallest unmatched
// dart is processed first and matched either to a fresh vertex or to a later
// unmatched dart.  Every connected gluing with the given valency multiset is
// reached (once per admissible root dart), so a canonical-form set dedupes
// into isomorphism classes.
struct StubGluer {
  std::vector<int> remaining_valencies;  // sorted multiset of valencies still to place
  std::vector<int> offset, val;          // per created vertex
  std::vector<int> match;                // per dart id, -1 if open
  std::function<void(const Perm&, const Perm&)> emit;

  void run(const std::vector<int>& profile) {
    std::map<int, int> bag;
    for (int v : profile) bag[v]++;
    for (auto& [valency, cnt] : bag) {
      auto bag2 = bag;
      if (--bag2[valency] == 0) bag2.erase(valency);
      offset = {0};
      val = {valency};
      match.assign(valency, -1);
      remaining_valencies.clear();
      for (auto& [w, c] : bag2)
        for (int i = 0; i < c; ++i) remaining_valencies.push_back(w);
      recurse(0);
    }
  }

  void recurse(int scan_from) {
    int d = -1;
    for (int i = scan_from; i < static_cast<int>(match.size()); ++i)
      if (match[i] < 0) {
        d = i;
        break;
      }
    if (d < 0) {
      if (remaining_valencies.empty()) finish();
      return;
    }
    // glue d to slot 0 of a fresh vertex (one branch per distinct valency)
    int last = -1;
    for (size_t i = 0; i < remaining_valencies.size(); ++i) {
      int w = remaining_valencies[i];
      if (w == last) continue;
      last = w;
      auto rem = remaining_valencies;
      rem.erase(rem.begin() + i);
      int base = static_cast<int>(match.size());
      offset.push_back(base);
      val.push_back(w);
      match.resize(base + w, -1);
      match[d] = base;
      match[base] = d;
      std::swap(rem, remaining_valencies);
      recurse(d + 1);
      std::swap(rem, remaining_valencies);
      match[d] = -1;
      match.resize(base);
      offset.pop_back();
      val.pop_back();
    }
    // or to a later open dart (possibly at the same vertex: a loop)
    for (int d2 = d + 1; d2 < static_cast<int>(match.size()); ++d2) {
      if (match[d2] >= 0) continue;
      match[d] = d2;
      match[d2] = d;
      recurse(d + 1);
      match[d] = -1;
      match[d2] = -1;
    }
  }

  void finish() {
    const int D = static_cast<int>(match.size());
    Perm sigma(D), iota(D);
    for (size_t v = 0; v < offset.size(); ++v)
      for (int j = 0; j < val[v]; ++j)
        sigma[offset[v] + j] = offset[v] + (j + 1) % val[v];
    for (int d = 0; d < D; ++d) iota[d] = match[d];
    emit(sigma, iota);
  }
};

// partitions of `total` into exactly `parts` parts, each >= 3, descending
void valency_profiles(int total, int parts, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  if (parts == 0) {
    if (total == 0) out.push_back(cur);
    return;
  }
  int hi = total - 3 * (parts - 1);
  int cap = cur.empty() ? hi : std::min(hi, cur.back());
  for (int v = cap; v >= 3; --v) {
    cur.push_back(v);
    valency_profiles(total - v, parts - 1, cur, out);
    cur.pop_back();
  }
}

using TypeKey = std::pair<int, int>;  // (g, n)
using Bucket = std::map<TypeKey, std::vector<RibbonGraph>>;

std::string cache_file_name(int E, int V, bool trivalent_only) {
  return "classes_E" + std::to_string(E) + "_V" + std::to_string(V) +
         (trivalent_only ? "_tri" : "_all") + ".json";
}

bool load_bucket_from_disk(const std::string& dir, int E, int V, bool tri, Bucket& out) {
  std::ifstream in(std::filesystem::path(dir) / cache_file_name(E, V, tri));
  if (!in) return false;
  try {
    nlohmann::json j;
    in >> j;
    Bucket b;
    for (const auto& item : j) {
      Perm sigma = item.at("sigma").get<Perm>();
      std::vector<int> labels = item.at("labels").get<std::vector<int>>();
      RibbonGraph G(std::move(sigma), std::move(labels));
      b[{item.at("g").get<int>(), item.at("n").get<int>()}].push_back(std::move(G));
    }
    out = std::move(b);
    return true;
  } catch (...) {
    return false;
  }
}

void save_bucket_to_disk(const std::string& dir, int E, int V, bool tri, const Bucket& b) {
  try {
    std::filesystem::create_directories(dir);
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [type, graphs] : b)
      for (const auto& G : graphs) {
        std::vector<int> labels(G.darts());
        for (int d = 0; d < G.darts(); ++d) labels[d] = G.label_of_dart(d);
        j.push_back({{"g", type.first},
                     {"n", type.second},
                     {"sigma", G.sigma()},
                     {"labels", labels}});
      }
    std::ofstream out(std::filesystem::path(dir) / cache_file_name(E, V, tri));
    out << j;
  } catch (...) {
    // cache writes are best-effort
  }
}

std::map<std::tuple<int, int, bool>, Bucket>& bucket_memo() {
  static std::map<std::tuple<int, int, bool>, Bucket> memo;
  return memo;
}

std::mutex& bucket_memo_mutex() {
  static std::mutex mtx;
  return mtx;
}

// All connected label-free classes with E edges, V vertices, valencies >= 3
// (exactly 3 when trivalent_only), grouped by surface type (g, n).
const Bucket& unlabelled_bucket(int E, int V, bool trivalent_only) {
  auto& memo = bucket_memo();
  std::lock_guard<std::mutex> lk(bucket_memo_mutex());
  auto key = std::make_tuple(E, V, trivalent_only);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;

  const char* env = std::getenv("RIBBONVOL_CACHE_DIR");
  std::string dir = env ? env : "";
  Bucket bucket;
  if (!dir.empty() && load_bucket_from_disk(dir, E, V, trivalent_only, bucket))
    return memo.emplace(key, std::move(bucket)).first->second;

  if (V >= 1 && 2 * E >= 3 * V) {
    std::vector<std::vector<int>> profiles;
    if (trivalent_only) {
      if (2 * E == 3 * V) profiles.push_back(std::vector<int>(V, 3));
    } else {
      std::vector<int> cur;
      valency_profiles(2 * E, V, cur, profiles);
    }
    std::set<std::vector<int>> seen;
    StubGluer gluer;
    gluer.emit = [&](const Perm& sigma, const Perm& iota) {
      // face orbits straight from the permutations, before any renumbering
      Perm phi(sigma.size());
      for (size_t d = 0; d < sigma.size(); ++d) phi[d] = iota[sigma[d]];
      std::vector<int> labs(sigma.size(), 0);
      int nf = 0;
      for (size_t d = 0; d < sigma.size(); ++d) {
        if (labs[d]) continue;
        ++nf;
        for (int x = static_cast<int>(d); !labs[x]; x = phi[x]) labs[x] = nf;
      }
      RibbonGraph G = RibbonGraph::from_permutations(sigma, iota, labs);
      auto enc = G.canonical_encoding(false);
      if (seen.insert(std::move(enc)).second)
        bucket[{G.genus(), G.boundaries()}].push_back(std::move(G));
    };
    for (const auto& p : profiles) gluer.run(p);
    for (auto& [type, graphs] : bucket)
      std::sort(graphs.begin(), graphs.end(), [](const RibbonGraph& a, const RibbonGraph& b) {
        return a.canonical_encoding(false) < b.canonical_encoding(false);
      });
  }
  if (!dir.empty()) save_bucket_to_disk(dir, E, V, trivalent_only, bucket);
  return memo.emplace(key, std::move(bucket)).first->second;
}

std::vector<RibbonGraph> unlabelled_classes(int E, int g, int n, bool trivalent_only) {
  const int V = E + 2 - 2 * g - n;
  const Bucket& b = unlabelled_bucket(E, V, trivalent_only);
  auto it = b.find({g, n});
  return it == b.end() ? std::vector<RibbonGraph>{} : it->second;
}

void check_desk_scale(int g, int n) {
  if (g < 0 || n < 1 || 2 * g - 2 + n <= 0)
    throw std::invalid_argument("type (g,n) must satisfy g >= 0, n >= 1, 2g-2+n > 0");
  if (6 * g - 6 + 3 * n > 15)
    throw std::runtime_error("enumeration beyond desk scale (6g-6+3n > 15)");
}

}  // namespace

void detail::clear_enumeration_memo() {
  std::lock_guard<std::mutex> lk(bucket_memo_mutex());
  bucket_memo().clear();
}

std::vector<RibbonGraph> labellings_up_to_aut(const RibbonGraph& G) {
  const int n = G.num_faces();
  auto aut = G.automorphism_group(false);
  // the induced action of each automorphism on face orbits
  std::vector<Perm> face_actions;
  for (const auto& f : aut.elements) {
    Perm fa(n);
    for (int orb = 0; orb < n; ++orb)
      fa[orb] = G.face_orbit_of(f[G.face_cycles()[orb][0]]);
    face_actions.push_back(std::move(fa));
  }
  std::vector<int> labelling(n);
  std::iota(labelling.begin(), labelling.end(), 1);  // labelling[orbit] = label
  std::set<std::vector<int>> reps;
  std::vector<RibbonGraph> out;
  do {
    std::vector<int> best = labelling;
    for (const auto& fa : face_actions) {
      std::vector<int> cand(n);
      for (int orb = 0; orb < n; ++orb) cand[orb] = labelling[fa[orb]];
      if (cand < best) best = cand;
    }
    if (reps.insert(best).second) {
      std::vector<int> by_dart(G.darts());
      for (int d = 0; d < G.darts(); ++d) by_dart[d] = best[G.face_orbit_of(d)];
      out.emplace_back(G.sigma(), by_dart);
    }
  } while (std::next_permutation(labelling.begin(), labelling.end()));
  std::sort(out.begin(), out.end(), [](const RibbonGraph& a, const RibbonGraph& b) {
    return a.canonical_encoding(true) < b.canonical_encoding(true);
  });
  return out;
}

void for_each_trivalent_labelled(int g, int n,
                                 const std::function<bool(const RibbonGraph&)>& fn) {
  check_desk_scale(g, n);
  const int E = 6 * g - 6 + 3 * n;
  for (const auto& G : unlabelled_classes(E, g, n, true))
    for (const auto& L : labellings_up_to_aut(G))
      if (!fn(L)) return;
}

namespace {

std::vector<RibbonGraph> enumerate_labelled(int g, int n, bool trivalent_only) {
  check_desk_scale(g, n);
  std::vector<RibbonGraph> out;
  const int Emax = 6 * g - 6 + 3 * n;
  const int Emin = trivalent_only ? Emax : std::max(1, 2 * g + n - 1);
  for (int E = Emin; E <= Emax; ++E)
    for (const auto& G : unlabelled_classes(E, g, n, trivalent_only))
      for (auto& L : labellings_up_to_aut(G)) out.push_back(std::move(L));
  std::sort(out.begin(), out.end(), [](const RibbonGraph& a, const RibbonGraph& b) {
    return a.canonical_encoding(true) < b.canonical_encoding(true);
  });
  return out;
}

}  // namespace

std::vector<RibbonGraph> enumerate_trivalent(int g, int n) {
  return enumerate_labelled(g, n, true);
}

std::vector<RibbonGraph> enumerate_reduced(int g, int n) {
  return enumerate_labelled(g, n, false);
}

std::vector<RibbonGraph> enumerate_trivalent_unlabelled(int g, int n) {
  check_desk_scale(g, n);
  return unlabelled_classes(6 * g - 6 + 3 * n, g, n, true);
}

std::vector<RibbonGraph> enumerate_reduced_unlabelled(int g, int n) {
  check_desk_scale(g, n);
  std::vector<RibbonGraph> out;
  for (int E = std::max(1, 2 * g + n - 1); E <= 6 * g - 6 + 3 * n; ++E)
    for (auto& G : unlabelled_classes(E, g, n, false)) out.push_back(std::move(G));
  std::sort(out.begin(), out.end(), [](const RibbonGraph& a, const RibbonGraph& b) {
    return a.canonical_encoding(false) < b.canonical_encoding(false);
  });
  return out;
}

long metric_automorphism_order(const RibbonGraph& G, const std::vector<Rat>& len) {
  auto aut = G.automorphism_group(true);
  long stab = 0;
  for (const auto& ea : aut.edge_actions) {
    bool fixes = true;
    for (int e = 0; e < G.num_edges() && fixes; ++e)
      if (len[e] != len[ea[e]]) fixes = false;
    if (fixes) ++stab;
  }
  return stab;
}

}  // namespace ribbonvol
