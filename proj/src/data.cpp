#include "rlbr/data.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "rlbr/rng.hpp"
#include "rlbr/text.hpp"

namespace rlbr {

namespace {

constexpr const char* kPromptTemplate =
    "Transcribe the audio clip into text with extra attention to the "
    "following words: ";

template <typename T>
void seeded_shuffle(std::vector<T>& items, Rng& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    size_t j = rng.next_below(i);
    std::swap(items[i - 1], items[j]);
  }
}

// Sample k items without replacement from a deterministically ordered pool.
std::vector<std::string> sample_without_replacement(
    std::vector<std::string> pool, size_t k, Rng& rng) {
  std::sort(pool.begin(), pool.end());
  for (size_t i = 0; i < k; ++i) {
    size_t j = i + rng.next_below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

nlohmann::json parse_line(const std::string& line, size_t lineno,
                          const std::string& path) {
  nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw std::runtime_error(path + ": malformed JSON at line " +
                             std::to_string(lineno));
  }
  return obj;
}

}  // namespace

std::set<std::string> build_rare_vocab(const std::vector<Utterance>& corpus,
                                       size_t common_top_k) {
  if (corpus.empty()) {
    throw std::invalid_argument("build_rare_vocab: empty corpus");
  }
  std::unordered_map<std::string, size_t> freq;
  for (const Utterance& utt : corpus) {
    if (utt.split != Split::kTrain) continue;
    for (const std::string& w : tokenize_words(normalize_text(utt.reference))) {
      ++freq[w];
    }
  }
  std::vector<std::pair<std::string, size_t>> by_freq(freq.begin(), freq.end());
  std::sort(by_freq.begin(), by_freq.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::set<std::string> rare;
  for (size_t i = common_top_k; i < by_freq.size(); ++i) {
    rare.insert(by_freq[i].first);
  }
  return rare;
}

BiasingList build_biasing_list(const Utterance& utt,
                               const std::set<std::string>& rare_vocab,
                               const std::set<std::string>& distractor_pool,
                               size_t n_distractors, uint64_t seed) {
  BiasingList list;
  list.seed = seed;
  std::vector<std::string> ref_words =
      tokenize_words(normalize_text(utt.reference));
  std::set<std::string> ref_set(ref_words.begin(), ref_words.end());
  std::set<std::string> seen;
  for (const std::string& w : ref_words) {
    if (rare_vocab.count(w) > 0 && seen.insert(w).second) {
      list.positives.push_back(w);
    }
  }
  std::vector<std::string> pool;
  for (const std::string& w : distractor_pool) {
    if (ref_set.count(w) == 0) pool.push_back(w);
  }
  if (pool.size() < n_distractors) {
    throw std::runtime_error(
        "distractor pool exhausted: need " + std::to_string(n_distractors) +
        ", have " + std::to_string(pool.size()) + " after excluding reference");
  }
  Rng rng = Rng(seed).derive(utt.id);
  list.distractors = sample_without_replacement(std::move(pool), n_distractors, rng);
  return list;
}

std::string render_prompt(const BiasingList& list) {
  std::vector<std::string> words = list.positives;
  words.insert(words.end(), list.distractors.begin(), list.distractors.end());
  Rng rng = Rng(list.seed).derive("prompt-shuffle");
  seeded_shuffle(words, rng);
  std::string out = kPromptTemplate;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += "*" + words[i] + "*";
  }
  return out;
}

std::pair<std::string, TaggedTranscript> augment_training_pair(
    const Utterance& utt, const std::set<std::string>& rare_vocab,
    const std::set<std::string>& global_vocab, size_t max_positives,
    size_t num_negatives, uint64_t seed) {
  std::vector<std::string> ref_words =
      tokenize_words(normalize_text(utt.reference));
  std::set<std::string> ref_set(ref_words.begin(), ref_words.end());

  std::vector<std::string> candidates;
  std::set<std::string> seen;
  for (const std::string& w : ref_words) {
    if (rare_vocab.count(w) > 0 && seen.insert(w).second) candidates.push_back(w);
  }
  Rng rng = Rng(seed).derive(utt.id);
  std::vector<std::string> positives = candidates;
  if (positives.size() > max_positives) {
    std::sort(positives.begin(), positives.end());
    positives = sample_without_replacement(std::move(positives), max_positives, rng);
  }
  std::set<std::string> positive_set(positives.begin(), positives.end());

  std::vector<std::string> neg_pool;
  for (const std::string& w : global_vocab) {
    if (ref_set.count(w) == 0) neg_pool.push_back(w);
  }
  if (neg_pool.size() < num_negatives) {
    throw std::runtime_error(
        "negative pool exhausted: need " + std::to_string(num_negatives) +
        ", have " + std::to_string(neg_pool.size()) + " after excluding reference");
  }
  std::vector<std::string> negatives =
      sample_without_replacement(std::move(neg_pool), num_negatives, rng);

  BiasingList list;
  list.seed = seed;
  list.positives = positives;
  list.distractors = negatives;
  std::string prompt = render_prompt(list);

  // Reference with each sampled positive tagged at every occurrence.
  std::string tagged;
  for (size_t i = 0; i < ref_words.size(); ++i) {
    if (i > 0) tagged.push_back(' ');
    if (positive_set.count(ref_words[i]) > 0) {
      tagged += "*" + ref_words[i] + "*";
    } else {
      tagged += ref_words[i];
    }
  }
  return {prompt, parse_biasing_tags(tagged)};
}

std::vector<Utterance> read_corpus_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Utterance> corpus;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json obj = parse_line(line, lineno, path);
    if (!obj.contains("id") || !obj.contains("text")) {
      throw std::runtime_error(path + ": missing id/text at line " +
                               std::to_string(lineno));
    }
    Utterance utt;
    utt.id = obj["id"].get<std::string>();
    utt.reference = obj["text"].get<std::string>();
    std::string split = obj.value("split", "train");
    if (split == "train") utt.split = Split::kTrain;
    else if (split == "test") utt.split = Split::kTest;
    else
      throw std::runtime_error(path + ": unknown split at line " +
                               std::to_string(lineno));
    corpus.push_back(std::move(utt));
  }
  return corpus;
}

std::map<std::string, std::string> read_hyps_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::map<std::string, std::string> hyps;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json obj = parse_line(line, lineno, path);
    if (!obj.contains("id") || !obj.contains("hyp")) {
      throw std::runtime_error(path + ": missing id/hyp at line " +
                               std::to_string(lineno));
    }
    hyps[obj["id"].get<std::string>()] = obj["hyp"].get<std::string>();
  }
  return hyps;
}

std::map<std::string, std::vector<std::string>> read_lists_jsonl(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::map<std::string, std::vector<std::string>> lists;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json obj = parse_line(line, lineno, path);
    if (!obj.contains("id") || !obj.contains("words")) {
      throw std::runtime_error(path + ": missing id/words at line " +
                               std::to_string(lineno));
    }
    lists[obj["id"].get<std::string>()] =
        obj["words"].get<std::vector<std::string>>();
  }
  return lists;
}

}  // namespace rlbr
