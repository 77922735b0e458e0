#include "ldsim/formspace.hpp"

#include <algorithm>
#include <unordered_set>

namespace ldsim {

std::uint32_t CueIndex::add(const std::string& trigram) {
    auto it = ids_.find(trigram);
    if (it != ids_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(trigrams_.size());
    ids_.emplace(trigram, id);
    trigrams_.push_back(trigram);
    return id;
}

std::optional<std::uint32_t> CueIndex::lookup(const std::string& trigram) const {
    auto it = ids_.find(trigram);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> extract_trigrams(const std::string& word) {
    if (word.empty())
        throw InvalidWordError("cannot extract trigrams from an empty word");
    if (word.find(kBoundary) != std::string::npos)
        throw InvalidWordError("word contains the boundary marker '#': " + word);

    const std::string padded = kBoundary + word + kBoundary;
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
        std::string tri = padded.substr(i, 3);
        if (seen.insert(tri).second) out.push_back(std::move(tri));
    }
    return out;
}

CueMatrix CueMatrix::build(const std::vector<std::string>& words) {
    if (words.empty()) throw EmptyInputError("cannot build a cue matrix from an empty lexicon");

    CueMatrix m;
    m.words_ = words;
    m.rows_.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        auto [it, inserted] = m.word_ids_.emplace(words[i], static_cast<std::uint32_t>(i));
        if (!inserted) throw DuplicateEntryError("duplicate word in lexicon: " + words[i]);

        CueVector row;
        for (const auto& tri : extract_trigrams(words[i]))
            row.active.push_back(m.index_.add(tri));
        std::sort(row.active.begin(), row.active.end());
        m.rows_.push_back(std::move(row));
    }
    // The index keeps growing during the build; fix dims afterwards.
    const auto dim = static_cast<std::uint32_t>(m.index_.size());
    for (auto& row : m.rows_) row.dim = dim;
    return m;
}

std::optional<std::uint32_t> CueMatrix::word_id(const std::string& word) const {
    auto it = word_ids_.find(word);
    if (it == word_ids_.end()) return std::nullopt;
    return it->second;
}

EncodedForm encode_form(const std::string& word, const CueIndex& index) {
    EncodedForm out;
    out.vec.dim = static_cast<std::uint32_t>(index.size());
    for (const auto& tri : extract_trigrams(word)) {
        if (auto id = index.lookup(tri))
            out.vec.active.push_back(*id);
        else
            ++out.dropped;
    }
    std::sort(out.vec.active.begin(), out.vec.active.end());
    return out;
}

std::vector<std::string> coltheart_neighbors(const std::string& word,
                                             const std::vector<std::string>& lexicon) {
    std::vector<std::string> out;
    for (const auto& cand : lexicon) {
        if (cand.size() != word.size() || cand == word) continue;
        std::size_t diff = 0;
        for (std::size_t i = 0; i < word.size() && diff < 2; ++i)
            if (word[i] != cand[i]) ++diff;
        if (diff == 1) out.push_back(cand);
    }
    return out;
}

std::size_t levenshtein_distance(const std::string& a, const std::string& b) {
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    if (m == 0) return n;
    if (n == 0) return m;

    std::vector<std::size_t> row(n + 1);
    for (std::size_t j = 0; j <= n; ++j) row[j] = j;
    for (std::size_t i = 1; i <= m; ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= n; ++j) {
            std::size_t up = row[j];
            if (a[i - 1] == b[j - 1])
                row[j] = diag;
            else
                row[j] = std::min({row[j - 1], row[j], diag}) + 1;
            diag = up;
        }
    }
    return row[n];
}

std::size_t levenshtein_neighbors(const std::string& word,
                                  const std::vector<std::string>& lexicon) {
    std::size_t count = 0;
    const std::size_t len = word.size();
    for (const auto& cand : lexicon) {
        const std::size_t clen = cand.size();
        if (cand == word) continue;
        if (clen + 1 < len || len + 1 < clen) continue; // |length difference| > 1
        if (levenshtein_distance(word, cand) == 1) ++count;
    }
    return count;
}

} // namespace ldsim
