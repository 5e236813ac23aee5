#include "lmap/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "lmap/sampling.hpp"

namespace lmap {

std::vector<PaperRecord> preferential_attachment_corpus(const SyntheticOptions& options) {
  if (options.topics == 0) throw UsageError("synthetic corpus needs at least one topic");
  if (options.mean_references < 1.0) throw UsageError("mean reference count must be at least 1");
  SampleRng rng(options.seed);
  const auto n = options.papers;
  std::vector<PaperRecord> records(n);
  std::vector<std::size_t> topic(n);

  // Each paper appears once per citation received plus once for itself.
  std::vector<std::vector<NodeId>> topic_pool(options.topics);
  std::vector<NodeId> global_pool;

  const auto max_refs = static_cast<std::uint64_t>(std::llround(2 * options.mean_references - 1));
  const int year_span = options.last_year - options.first_year;
  for (NodeId i = 0; i < n; ++i) {
    auto& rec = records[i];
    rec.id = std::to_string(i + 1);
    rec.year = options.first_year + static_cast<int>((static_cast<std::uint64_t>(year_span) * i) / std::max<std::size_t>(n, 1));
    topic[i] = static_cast<std::size_t>(rng.below(options.topics));
    rec.title = "Synthetic paper " + rec.id;

    if (!options.shared_keyword.empty()) rec.keywords.push_back(options.shared_keyword);
    rec.keywords.push_back("Topic " + std::to_string(topic[i]));
    for (int t = 0; t < 2; ++t) {
      rec.keywords.push_back("Topic " + std::to_string(topic[i]) + " term " +
                             std::to_string(rng.below(options.terms_per_topic)));
    }
    rec.keywords.push_back("General " + std::to_string(rng.below(4)));
    std::sort(rec.keywords.begin() + (options.shared_keyword.empty() ? 0 : 1), rec.keywords.end());
    rec.keywords.erase(std::unique(rec.keywords.begin(), rec.keywords.end()), rec.keywords.end());

    if (i >= options.founders && i > 0) {
      const auto want = std::min<std::uint64_t>(1 + rng.below(max_refs), i);
      std::vector<NodeId> refs;
      for (std::uint64_t attempt = 0; refs.size() < want && attempt < want * 20; ++attempt) {
        const auto& own = topic_pool[topic[i]];
        const bool local = !own.empty() && rng.unit() < options.topic_affinity;
        const auto& pool = local ? own : global_pool;
        NodeId target = pool[rng.below(pool.size())];
        if (std::find(refs.begin(), refs.end(), target) == refs.end()) refs.push_back(target);
      }
      for (NodeId r : refs) {
        rec.references.push_back(records[r].id);
        topic_pool[topic[r]].push_back(r);
        global_pool.push_back(r);
      }
    }
    topic_pool[topic[i]].push_back(i);
    global_pool.push_back(i);
  }
  return records;
}

void write_json_lines(std::span<const PaperRecord> records, std::ostream& out) {
  for (const auto& rec : records) {
    nlohmann::json obj;
    obj["id"] = rec.id;
    obj["title"] = rec.title;
    if (rec.year) obj["year"] = *rec.year;
    obj["references"] = rec.references;
    auto fos = nlohmann::json::array();
    for (const auto& kw : rec.keywords) fos.push_back({{"name", kw}, {"w", 0.5}});
    obj["fos"] = std::move(fos);
    out << obj.dump() << '\n';
  }
}

}  // namespace lmap
