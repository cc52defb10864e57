#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "hvaclab/core.hpp"

// Demonstration storage and retrieval: deterministic 512-d feature-hash text
// embeddings, exact KNN over expert datasets, k-means representatives, and
// the per-episode online buffer.

namespace hvaclab {

inline constexpr std::size_t kEmbeddingDim = 512;

struct Embedding {
  std::array<double, kEmbeddingDim> values{};

  double dot(const Embedding& other) const;
  double norm() const;
  double squared_distance(const Embedding& other) const;
};

// Signed feature hashing: lowercase alphanumeric tokens, FNV-1a 64-bit per
// token, bucket = hash % 512, sign from hash bit 9, counts accumulated and
// L2-normalised. Throws ValueError when the text has no tokens (or the
// signed counts cancel to a zero vector).
Embedding embed(const std::string& text);

struct DemoRecord {
  Building building = Building::OfficeMedium;
  Weather weather = Weather::CoolDry;
  StateVector state;          // pre-action state (the retrieval situation)
  ActionVector action;
  double reward = 0.0;
  std::vector<double> next_room_temps;  // post-action temps behind feedback_text
  std::string state_text;
  std::string action_text;
  std::string feedback_text;
  Embedding key;              // embed(meta_text + state_text), unit norm
};

// Renders texts (rounded numbers) and the embedding key for one transition.
DemoRecord make_demo_record(const ScenarioConfig& cfg, const StateVector& state,
                            const ActionVector& action, const StepOutcome& outcome);

struct DemoDataset {
  std::vector<DemoRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

// Line-delimited JSON, one record per line with a schema version field.
// Numeric fields are authoritative; texts and keys regenerate on load.
void save_dataset(const DemoDataset& ds, const std::string& path);
DemoDataset load_dataset(const std::string& path);

using ScenarioPredicate = std::function<bool(Building, Weather)>;
DemoDataset filter_dataset(const DemoDataset& ds, const ScenarioPredicate& keep);

// Bounded FIFO of recent interactions; eviction is oldest-first.
class OnlineBuffer {
 public:
  explicit OnlineBuffer(std::size_t capacity = 64);

  void push(DemoRecord record);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }

  // Insertion order (oldest first).
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const DemoRecord& operator[](std::size_t i) const { return items_[i]; }

  // The most recent n records (fewer if underfull), oldest of those first.
  std::vector<DemoRecord> recent(std::size_t n) const;

 private:
  std::deque<DemoRecord> items_;
  std::size_t capacity_;
};

// The min(k, |dataset|) records most cosine-similar to query, descending;
// ties break toward the earlier record.
std::vector<DemoRecord> knn(const Embedding& query, const DemoDataset& dataset,
                            std::size_t k);

// Lloyd's algorithm with k-means++ seeding over the embedding keys; returns
// the member closest to each centroid, ordered by cluster size descending.
// Requires 1 <= k <= |dataset|.
std::vector<DemoRecord> kmeans_representatives(const DemoDataset& dataset, std::size_t k,
                                               std::uint64_t seed);

struct DemoMix {
  std::size_t n_hist = 2;
  std::size_t n_repr = 2;
  std::size_t n_expert = 4;

  std::size_t total() const { return n_hist + n_repr + n_expert; }
};

enum class DemoKind { Historical, Representative, Expert, Random };

struct TaggedDemo {
  DemoKind kind;
  DemoRecord record;
};

// Memoises kmeans_representatives per (dataset, k, seed); representative
// demonstrations are constant across the steps of a run.
class RepresentativeCache {
 public:
  const std::vector<DemoRecord>& get(const DemoDataset& dataset, std::size_t k,
                                     std::uint64_t seed);

 private:
  std::map<std::tuple<const DemoDataset*, std::size_t, std::uint64_t>,
           std::vector<DemoRecord>>
      cache_;
};

// Historical (most recent from buffer, oldest of those first), then
// representative, then expert KNN hits. Asking for more than available yields
// what exists; n_repr > 0 with an empty expert dataset is a ConfigError.
std::vector<TaggedDemo> select_demos(const Embedding& query, const OnlineBuffer& buffer,
                                     const DemoDataset& expert, const DemoMix& mix,
                                     std::uint64_t seed,
                                     RepresentativeCache* cache = nullptr);

// m records sampled without replacement; m > |dataset| is a ConfigError.
std::vector<TaggedDemo> random_demos(const DemoDataset& dataset, std::size_t m,
                                     std::mt19937_64& rng);

}  // namespace hvaclab
