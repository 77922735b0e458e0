#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ldsim/errors.hpp"

namespace ldsim {

// Word-boundary marker used when padding wordforms.
inline constexpr char kBoundary = '#';

/// Maps letter trigrams to dense 0-based column ids. Ids are assigned in
/// order of first occurrence, so rebuilding from the same word list yields
/// the same index.
class CueIndex {
public:
    // Returns the id of `trigram`, inserting it if unknown.
    std::uint32_t add(const std::string& trigram);

    std::optional<std::uint32_t> lookup(const std::string& trigram) const;

    std::size_t size() const { return trigrams_.size(); }

    const std::string& trigram(std::uint32_t id) const { return trigrams_.at(id); }

private:
    std::unordered_map<std::string, std::uint32_t> ids_;
    std::vector<std::string> trigrams_;
};

/// Sparse binary cue vector: the sorted set of active trigram column ids.
struct CueVector {
    std::vector<std::uint32_t> active; // sorted, unique
    std::uint32_t dim = 0;

    std::size_t count() const { return active.size(); }
    bool empty() const { return active.empty(); }
};

struct EncodedForm {
    CueVector vec;
    std::size_t dropped = 0; // trigrams of the word absent from the index
};

/// Word-by-trigram binary matrix with its trigram index.
class CueMatrix {
public:
    static CueMatrix build(const std::vector<std::string>& words);

    std::size_t word_count() const { return rows_.size(); }
    std::size_t cue_count() const { return index_.size(); }

    const CueVector& row(std::size_t word_id) const { return rows_.at(word_id); }
    const std::string& word(std::size_t word_id) const { return words_.at(word_id); }
    const CueIndex& index() const { return index_; }
    const std::vector<std::string>& words() const { return words_; }

    std::optional<std::uint32_t> word_id(const std::string& word) const;

private:
    std::vector<CueVector> rows_;
    CueIndex index_;
    std::vector<std::string> words_;
    std::unordered_map<std::string, std::uint32_t> word_ids_;
};

/// Unique trigrams of `#word#` in order of first occurrence.
/// Words of length 1 yield the single trigram `#w#`.
std::vector<std::string> extract_trigrams(const std::string& word);

/// Encodes a word against an existing index. Trigrams not present in the
/// index are dropped and counted, never an error (nonwords may contain
/// unseen trigrams).
EncodedForm encode_form(const std::string& word, const CueIndex& index);

/// All lexicon entries of equal length at Hamming distance exactly 1
/// (the word itself excluded).
std::vector<std::string> coltheart_neighbors(const std::string& word,
                                             const std::vector<std::string>& lexicon);

/// Number of lexicon entries at Levenshtein distance exactly 1 from `word`
/// (unit-cost insert/delete/substitute; the word itself excluded).
std::size_t levenshtein_neighbors(const std::string& word,
                                  const std::vector<std::string>& lexicon);

/// Unit-cost edit distance. Exposed for reuse and testing.
std::size_t levenshtein_distance(const std::string& a, const std::string& b);

} // namespace ldsim
