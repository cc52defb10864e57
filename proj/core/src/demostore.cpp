#include "hvaclab/demostore.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "hvaclab/rng.hpp"
#include "hvaclab/translate.hpp"

namespace hvaclab {

namespace {

constexpr int kDatasetVersion = 1;

// FNV-1a 64-bit.
std::uint64_t fnv1a(const std::string& token) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : token) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

double Embedding::dot(const Embedding& other) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < kEmbeddingDim; ++i) acc += values[i] * other.values[i];
  return acc;
}

double Embedding::norm() const { return std::sqrt(dot(*this)); }

double Embedding::squared_distance(const Embedding& other) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < kEmbeddingDim; ++i) {
    const double d = values[i] - other.values[i];
    acc += d * d;
  }
  return acc;
}

Embedding embed(const std::string& text) {
  Embedding e;
  std::string token;
  bool any_token = false;
  auto flush = [&] {
    if (token.empty()) return;
    any_token = true;
    const std::uint64_t h = fnv1a(token);
    const std::size_t bucket = h % kEmbeddingDim;
    const double sign = ((h >> 9) & 1u) ? 1.0 : -1.0;  // bit independent of bucket
    e.values[bucket] += sign;
    token.clear();
  };
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      token.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  if (!any_token) throw ValueError("embed: text has no tokens");
  const double norm = e.norm();
  if (norm == 0.0) throw ValueError("embed: token signs cancelled to a zero vector");
  for (double& v : e.values) v /= norm;
  return e;
}

DemoRecord make_demo_record(const ScenarioConfig& cfg, const StateVector& state,
                            const ActionVector& action, const StepOutcome& outcome) {
  DemoRecord r;
  r.building = cfg.building;
  r.weather = cfg.weather;
  r.state = state;
  r.action = action;
  r.reward = outcome.reward;
  r.next_room_temps = outcome.next_state.room_temps;
  r.state_text = state_translate(state, cfg, /*rounded=*/true).text;
  r.action_text = action_translate(action).text;
  r.feedback_text = feedback_translate(outcome, cfg).text;
  r.key = embed(meta_translate(cfg).text + r.state_text);
  return r;
}

void save_dataset(const DemoDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open dataset file for writing: " + path);
  for (const DemoRecord& r : ds.records) {
    nlohmann::json j;
    j["version"] = kDatasetVersion;
    j["building"] = to_string(r.building);
    j["weather"] = to_string(r.weather);
    j["room_temps"] = r.state.room_temps;
    j["outside_temp"] = r.state.outside_temp;
    j["ghi"] = r.state.ghi;
    j["ground_temp"] = r.state.ground_temp;
    j["occupant_power"] = r.state.occupant_power;
    j["action"] = r.action.values;
    j["reward"] = r.reward;
    j["next_room_temps"] = r.next_room_temps;
    // Needed to regenerate the texts exactly.
    j["target_temp"] = 22.0;
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("failed writing dataset file: " + path);
}

namespace {

DemoRecord record_from_json(const nlohmann::json& j) {
  if (!j.contains("version") || j.at("version").get<int>() != kDatasetVersion) {
    throw ConfigError("dataset record has unsupported version");
  }
  ScenarioConfig cfg;
  cfg.building = building_from_string(j.at("building").get<std::string>());
  cfg.weather = weather_from_string(j.at("weather").get<std::string>());
  cfg.target_temp = j.value("target_temp", 22.0);

  StateVector state;
  state.room_temps = j.at("room_temps").get<std::vector<double>>();
  state.outside_temp = j.at("outside_temp").get<double>();
  state.ghi = j.at("ghi").get<double>();
  state.ground_temp = j.at("ground_temp").get<double>();
  state.occupant_power = j.at("occupant_power").get<double>();
  state.validate();

  ActionVector action;
  action.values = j.at("action").get<std::vector<double>>();
  if (action.size() != state.n_rooms()) {
    throw DimensionError("dataset record: action length != room count");
  }

  StepOutcome outcome;
  outcome.reward = j.at("reward").get<double>();
  outcome.next_state = state;
  outcome.next_state.room_temps = j.at("next_room_temps").get<std::vector<double>>();
  if (outcome.next_state.n_rooms() != state.n_rooms()) {
    throw DimensionError("dataset record: next_room_temps length != room count");
  }
  return make_demo_record(cfg, state, action, outcome);
}

}  // namespace

DemoDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file: " + path);
  DemoDataset ds;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": invalid JSON record");
    }
    try {
      ds.records.push_back(record_from_json(j));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return ds;
}

DemoDataset filter_dataset(const DemoDataset& ds, const ScenarioPredicate& keep) {
  DemoDataset out;
  for (const DemoRecord& r : ds.records) {
    if (keep(r.building, r.weather)) out.records.push_back(r);
  }
  return out;
}

OnlineBuffer::OnlineBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw ConfigError("buffer capacity must be > 0");
}

void OnlineBuffer::push(DemoRecord record) {
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back(std::move(record));
}

std::vector<DemoRecord> OnlineBuffer::recent(std::size_t n) const {
  const std::size_t take = std::min(n, items_.size());
  std::vector<DemoRecord> out;
  out.reserve(take);
  for (std::size_t i = items_.size() - take; i < items_.size(); ++i) {
    out.push_back(items_[i]);
  }
  return out;
}

std::vector<DemoRecord> knn(const Embedding& query, const DemoDataset& dataset,
                            std::size_t k) {
  const std::size_t take = std::min(k, dataset.size());
  std::vector<std::size_t> idx(dataset.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> sim(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    sim[i] = query.dot(dataset.records[i].key);
  }
  // Stable sort keeps insertion order among equal similarities.
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return sim[a] > sim[b]; });
  std::vector<DemoRecord> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(dataset.records[idx[i]]);
  return out;
}

namespace {

// k-means++ over record keys: distinct indices, D^2 sampling.
std::vector<std::size_t> kmeanspp_centers(const DemoDataset& ds, std::size_t k,
                                          std::mt19937_64& g) {
  const std::size_t n = ds.size();
  std::vector<std::size_t> centers;
  centers.reserve(k);
  std::vector<bool> chosen(n, false);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  std::size_t first = uniform_index(g, n);
  centers.push_back(first);
  chosen[first] = true;

  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (chosen[i]) {
        d2[i] = 0.0;
        continue;
      }
      const double d = ds.records[i].key.squared_distance(ds.records[centers.back()].key);
      d2[i] = std::min(d2[i], d);
      total += d2[i];
    }
    std::size_t next = n;
    if (total > 0.0) {
      const double u = uniform_double(g) * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= u && !chosen[i]) {
          next = i;
          break;
        }
      }
    }
    if (next == n) {
      // All remaining mass is zero (duplicate keys): lowest unchosen index.
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) {
          next = i;
          break;
        }
      }
    }
    centers.push_back(next);
    chosen[next] = true;
  }
  return centers;
}

}  // namespace

std::vector<DemoRecord> kmeans_representatives(const DemoDataset& dataset, std::size_t k,
                                               std::uint64_t seed) {
  const std::size_t n = dataset.size();
  if (k < 1 || k > n) {
    throw ConfigError("kmeans: k = " + std::to_string(k) + " outside [1, " +
                      std::to_string(n) + "]");
  }

  std::mt19937_64 g(mix_seed(seed, 0x4b4d4e53u));
  const std::vector<std::size_t> seeds = kmeanspp_centers(dataset, k, g);
  std::vector<std::array<double, kEmbeddingDim>> centroids;
  centroids.reserve(k);
  for (std::size_t c : seeds) centroids.push_back(dataset.records[c].key.values);

  std::vector<std::size_t> assign(n, 0);
  auto dist2 = [&](std::size_t i, const std::array<double, kEmbeddingDim>& c) {
    double acc = 0.0;
    const auto& v = dataset.records[i].key.values;
    for (std::size_t d = 0; d < kEmbeddingDim; ++d) {
      const double diff = v[d] - c[d];
      acc += diff * diff;
    }
    return acc;
  };

  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = dist2(i, centroids[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double d = dist2(i, centroids[c]);
        if (d < best_d) {  // strict: ties keep the lower cluster index
          best_d = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    std::vector<std::size_t> count(k, 0);
    std::vector<std::array<double, kEmbeddingDim>> sum(
        k, std::array<double, kEmbeddingDim>{});
    for (std::size_t i = 0; i < n; ++i) {
      ++count[assign[i]];
      const auto& v = dataset.records[i].key.values;
      for (std::size_t d = 0; d < kEmbeddingDim; ++d) sum[assign[i]][d] += v[d];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] == 0) {
        // Relocate an empty cluster to the point farthest from its centroid.
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = dist2(i, centroids[assign[i]]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        centroids[c] = dataset.records[far].key.values;
        assign[far] = c;
        changed = true;
        continue;
      }
      for (std::size_t d = 0; d < kEmbeddingDim; ++d) {
        centroids[c][d] = sum[c][d] / static_cast<double>(count[c]);
      }
    }
    if (!changed) break;
  }

  std::vector<std::size_t> count(k, 0);
  for (std::size_t a : assign) ++count[a];
  std::vector<std::size_t> rep(k, n);
  std::vector<double> rep_d(k, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    const double d = dist2(i, centroids[assign[i]]);
    if (d < rep_d[assign[i]]) {  // strict: ties keep the lower record index
      rep_d[assign[i]] = d;
      rep[assign[i]] = i;
    }
  }

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return count[a] > count[b]; });

  std::vector<DemoRecord> out;
  out.reserve(k);
  for (std::size_t c : order) {
    if (rep[c] < n) out.push_back(dataset.records[rep[c]]);
  }
  return out;
}

const std::vector<DemoRecord>& RepresentativeCache::get(const DemoDataset& dataset,
                                                        std::size_t k,
                                                        std::uint64_t seed) {
  const auto key = std::make_tuple(&dataset, k, seed);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    it = cache_.emplace(key, kmeans_representatives(dataset, k, seed)).first;
  }
  return it->second;
}

std::vector<TaggedDemo> select_demos(const Embedding& query, const OnlineBuffer& buffer,
                                     const DemoDataset& expert, const DemoMix& mix,
                                     std::uint64_t seed, RepresentativeCache* cache) {
  if (mix.n_repr > 0 && expert.empty()) {
    throw ConfigError("representative demonstrations requested but expert dataset is empty");
  }
  std::vector<TaggedDemo> out;
  out.reserve(mix.total());
  for (DemoRecord& r : buffer.recent(mix.n_hist)) {
    out.push_back({DemoKind::Historical, std::move(r)});
  }
  if (mix.n_repr > 0) {
    const std::size_t k = std::min(mix.n_repr, expert.size());
    if (cache) {
      for (const DemoRecord& r : cache->get(expert, k, seed)) {
        out.push_back({DemoKind::Representative, r});
      }
    } else {
      for (DemoRecord& r : kmeans_representatives(expert, k, seed)) {
        out.push_back({DemoKind::Representative, std::move(r)});
      }
    }
  }
  for (DemoRecord& r : knn(query, expert, mix.n_expert)) {
    out.push_back({DemoKind::Expert, std::move(r)});
  }
  return out;
}

std::vector<TaggedDemo> random_demos(const DemoDataset& dataset, std::size_t m,
                                     std::mt19937_64& rng) {
  if (m > dataset.size()) {
    throw ConfigError("random_demos: m = " + std::to_string(m) + " > dataset size " +
                      std::to_string(dataset.size()));
  }
  std::vector<std::size_t> idx(dataset.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<TaggedDemo> out;
  out.reserve(m);
  // Partial Fisher-Yates, keeping draw order.
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + uniform_index(rng, idx.size() - i);
    std::swap(idx[i], idx[j]);
    out.push_back({DemoKind::Random, dataset.records[idx[i]]});
  }
  return out;
}

}  // namespace hvaclab
