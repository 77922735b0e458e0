#include "ldsim/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "detail/textio.hpp"

namespace ldsim {

using detail::fmt12;
using detail::parse_double;
using detail::parse_int;
using detail::read_lines;
using detail::split_csv;
using detail::split_ws;
using detail::write_text_atomic;

namespace {

const std::vector<std::string> kTrialColumns = {
    "subject", "order", "block", "session", "stimulus", "lexicality", "response", "rt_ms"};

bool truthy_flag(const std::string& tok) {
    return tok == "1" || tok == "true" || tok == "TRUE" || tok == "True";
}

char parse_wn(const std::string& tok, const std::string& path, std::size_t line,
              const char* what) {
    if (tok == "W" || tok == "w") return 'W';
    if (tok == "N" || tok == "n") return 'N';
    throw ParseError(path, line, std::string(what) + " must be W or N, got '" + tok + "'");
}

} // namespace

TrialData load_trials(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw ParseError(path, 1, "empty trial file");

    auto header = split_csv(lines[0]);
    bool has_timeout_col = false;
    if (header.size() == kTrialColumns.size() + 1 && header.back() == "timeout") {
        has_timeout_col = true;
        header.pop_back();
    }
    if (header != kTrialColumns)
        throw ParseError(path, 1,
                         "expected header subject,order,block,session,stimulus,lexicality,"
                         "response,rt_ms[,timeout]");

    TrialData data;
    std::unordered_map<int, std::size_t> subject_slot;
    std::unordered_map<int, std::uint64_t> last_order;

    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (detail::trim(lines[li]).empty()) continue;
        const std::size_t line_no = li + 1;
        auto fields = split_csv(lines[li]);
        const std::size_t expected = kTrialColumns.size() + (has_timeout_col ? 1 : 0);
        if (fields.size() != expected)
            throw ParseError(path, line_no,
                             "expected " + std::to_string(expected) + " fields, got " +
                                 std::to_string(fields.size()));

        TrialRecord rec;
        rec.subject = static_cast<int>(parse_int(fields[0], path, line_no, "subject"));
        const std::int64_t order = parse_int(fields[1], path, line_no, "order");
        if (order <= 0) throw ParseError(path, line_no, "order must be positive");
        rec.order = static_cast<std::uint64_t>(order);
        rec.block = static_cast<int>(parse_int(fields[2], path, line_no, "block"));
        rec.session = static_cast<int>(parse_int(fields[3], path, line_no, "session"));
        rec.stimulus = fields[4];
        if (rec.stimulus.empty()) throw ParseError(path, line_no, "empty stimulus");

        // Filters, applied in a fixed order so each removal lands in
        // exactly one class.
        if (rec.stimulus == "null" || rec.stimulus == "nan") {
            ++data.report.removed_null_stimulus;
            continue;
        }
        rec.lexicality = parse_wn(fields[5], path, line_no, "lexicality");
        const bool timeout_flag = has_timeout_col && truthy_flag(fields[8]);
        if (timeout_flag || fields[6].empty()) {
            ++data.report.removed_timeout;
            continue;
        }
        rec.response = parse_wn(fields[6], path, line_no, "response");
        rec.rt_ms = parse_double(fields[7], path, line_no, "rt_ms");
        if (!std::isfinite(rec.rt_ms)) throw ParseError(path, line_no, "rt_ms must be finite");
        if (rec.rt_ms <= 100.0) {
            ++data.report.removed_rt_low;
            continue;
        }
        if (rec.rt_ms > 2000.0) {
            ++data.report.removed_rt_high;
            continue;
        }

        auto [it, fresh] = subject_slot.try_emplace(rec.subject, data.subjects.size());
        if (fresh) data.subjects.push_back(SubjectTrials{rec.subject, {}});
        auto [ord_it, first_kept] = last_order.try_emplace(rec.subject, rec.order);
        if (!first_kept) {
            if (rec.order <= ord_it->second)
                throw ParseError(path, line_no,
                                 "order not strictly increasing within subject " +
                                     std::to_string(rec.subject));
            ord_it->second = rec.order;
        }
        data.subjects[it->second].trials.push_back(std::move(rec));
        ++data.report.kept;
    }
    return data;
}

void write_trials(const std::vector<TrialRecord>& trials, const std::string& path) {
    std::ostringstream out;
    out << "subject,order,block,session,stimulus,lexicality,response,rt_ms\n";
    for (const TrialRecord& t : trials) {
        out << t.subject << ',' << t.order << ',' << t.block << ',' << t.session << ','
            << t.stimulus << ',' << t.lexicality << ',' << t.response << ',' << fmt12(t.rt_ms)
            << '\n';
    }
    write_text_atomic(path, out.str());
}

double rtinv(double rt_ms) {
    if (!(rt_ms > 0.0)) throw Error("rtinv requires a positive rt");
    return -1000.0 / rt_ms;
}

double log_backoff(double x) {
    if (x < 0.0) throw Error("log_backoff requires a non-negative value");
    return std::log(x == 0.0 ? kLogBackoffFloor : x);
}

int zero_indicator(double x) {
    if (x < 0.0) throw Error("zero_indicator requires a non-negative value");
    return x == 0.0 ? 0 : 1;
}

std::vector<double> standardize(const std::vector<double>& xs) {
    if (xs.size() < 2) throw Error("standardize requires at least two values");
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (sd == 0.0) throw Error("standardize requires a non-constant column");
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (xs[i] - mean) / sd;
    return out;
}

PredictorTable PredictorTable::from_measures(const std::vector<MeasureRow>& rows) {
    if (rows.empty()) throw EmptyInputError("no measure rows to build predictors from");

    std::vector<double> trial_numbers(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        trial_numbers[i] = static_cast<double>(rows[i].order);
    const std::vector<double> trial_z = standardize(trial_numbers);

    PredictorTable t;
    t.names_ = {"rtinv",          "trial_z",
                "log_frequency",  "in_bnc",
                "word_length",    "log_neighborhood_size",
                "has_neighbours", "log_shortest_path",
                "has_neighbours_path", "log_l1chat",
                "log_semantic_density", "c_precision",
                "yes_activation", "response_w",
                "session"};
    t.values_.resize(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(t.names_.size()));
    t.lex_.reserve(rows.size());

    auto warn_below_floor = [&t](const char* name, const MeasureRow& row, double v) {
        if (v > 0.0 && v < kLogBackoffFloor)
            t.warnings_.push_back(std::string(name) + " for '" + row.stimulus + "' (order " +
                                  std::to_string(row.order) + ") is " + fmt12(v) +
                                  ", below the log floor " + fmt12(kLogBackoffFloor));
    };

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const MeasureRow& r = rows[i];
        warn_below_floor("frequency", r, r.frequency);
        warn_below_floor("neighborhood_size", r, r.neighborhood_size);
        warn_below_floor("shortest_path", r, r.shortest_path);
        warn_below_floor("l1chat", r, r.l1chat);
        warn_below_floor("semantic_density", r, r.semantic_density);

        const auto row = static_cast<Eigen::Index>(i);
        t.values_(row, 0) = rtinv(r.rt_ms);
        t.values_(row, 1) = trial_z[i];
        t.values_(row, 2) = log_backoff(r.frequency);
        t.values_(row, 3) = zero_indicator(r.frequency);
        t.values_(row, 4) = r.word_length;
        t.values_(row, 5) = log_backoff(r.neighborhood_size);
        t.values_(row, 6) = zero_indicator(r.neighborhood_size);
        t.values_(row, 7) = log_backoff(r.shortest_path);
        t.values_(row, 8) = r.has_neighbours_path ? 1.0 : 0.0;
        t.values_(row, 9) = log_backoff(r.l1chat);
        t.values_(row, 10) = log_backoff(r.semantic_density);
        t.values_(row, 11) = r.c_precision;
        t.values_(row, 12) = r.yes_activation;
        t.values_(row, 13) = r.response == 'W' ? 1.0 : 0.0;
        t.values_(row, 14) = r.session;
        t.lex_.push_back(r.lexicality);
    }
    return t;
}

bool PredictorTable::has_column(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

Eigen::VectorXd PredictorTable::column(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw Error("unknown predictor column: " + name);
    return values_.col(static_cast<Eigen::Index>(it - names_.begin()));
}

PredictorTable PredictorTable::filter_lexicality(char lex) const {
    PredictorTable out;
    out.names_ = names_;
    out.warnings_ = warnings_;
    std::vector<Eigen::Index> keep;
    for (std::size_t i = 0; i < lex_.size(); ++i)
        if (lex_[i] == lex) keep.push_back(static_cast<Eigen::Index>(i));
    out.values_.resize(static_cast<Eigen::Index>(keep.size()), values_.cols());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        out.values_.row(static_cast<Eigen::Index>(i)) = values_.row(keep[i]);
        out.lex_.push_back(lex);
    }
    return out;
}

namespace {

const std::string kMeasureHeader =
    "subject,order,block,session,stimulus,lexicality,response,rt_ms,"
    "semantic_density,shortest_path,has_neighbours_path,c_precision,l1chat,yes_activation,"
    "word_length,frequency,in_bnc,neighborhood_size,dropped_cues";

} // namespace

void write_measures(const std::vector<MeasureRow>& rows, const std::string& path) {
    std::ostringstream out;
    out << kMeasureHeader << '\n';
    for (const MeasureRow& r : rows) {
        out << r.subject << ',' << r.order << ',' << r.block << ',' << r.session << ','
            << r.stimulus << ',' << r.lexicality << ',' << r.response << ',' << fmt12(r.rt_ms)
            << ',' << fmt12(r.semantic_density) << ',' << fmt12(r.shortest_path) << ','
            << (r.has_neighbours_path ? 1 : 0) << ',' << fmt12(r.c_precision) << ','
            << fmt12(r.l1chat) << ',' << fmt12(r.yes_activation) << ',' << r.word_length << ','
            << fmt12(r.frequency) << ',' << (r.in_bnc ? 1 : 0) << ',' << r.neighborhood_size
            << ',' << r.dropped_cues << '\n';
    }
    write_text_atomic(path, out.str());
}

std::vector<MeasureRow> read_measures(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || lines[0] != kMeasureHeader)
        throw ParseError(path, 1, "unexpected measure file header");
    std::vector<MeasureRow> rows;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (detail::trim(lines[li]).empty()) continue;
        const std::size_t line_no = li + 1;
        auto f = split_csv(lines[li]);
        if (f.size() != 19)
            throw ParseError(path, line_no, "expected 19 fields, got " +
                                                std::to_string(f.size()));
        MeasureRow r;
        r.subject = static_cast<int>(parse_int(f[0], path, line_no, "subject"));
        r.order = static_cast<std::uint64_t>(parse_int(f[1], path, line_no, "order"));
        r.block = static_cast<int>(parse_int(f[2], path, line_no, "block"));
        r.session = static_cast<int>(parse_int(f[3], path, line_no, "session"));
        r.stimulus = f[4];
        r.lexicality = parse_wn(f[5], path, line_no, "lexicality");
        r.response = parse_wn(f[6], path, line_no, "response");
        r.rt_ms = parse_double(f[7], path, line_no, "rt_ms");
        r.semantic_density = parse_double(f[8], path, line_no, "semantic_density");
        r.shortest_path = parse_double(f[9], path, line_no, "shortest_path");
        r.has_neighbours_path = parse_int(f[10], path, line_no, "has_neighbours_path") != 0;
        r.c_precision = parse_double(f[11], path, line_no, "c_precision");
        r.l1chat = parse_double(f[12], path, line_no, "l1chat");
        r.yes_activation = parse_double(f[13], path, line_no, "yes_activation");
        r.word_length = static_cast<int>(parse_int(f[14], path, line_no, "word_length"));
        r.frequency = parse_double(f[15], path, line_no, "frequency");
        r.in_bnc = parse_int(f[16], path, line_no, "in_bnc") != 0;
        r.neighborhood_size =
            static_cast<int>(parse_int(f[17], path, line_no, "neighborhood_size"));
        r.dropped_cues = static_cast<std::uint32_t>(parse_int(f[18], path, line_no,
                                                              "dropped_cues"));
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_skip_log(const std::vector<SkipEntry>& entries, const std::string& path) {
    std::ostringstream out;
    out << "subject,order,stimulus,reason\n";
    for (const SkipEntry& e : entries)
        out << e.subject << ',' << e.order << ',' << e.stimulus << ',' << e.reason << '\n';
    write_text_atomic(path, out.str());
}

void write_data_dictionary(const std::string& path) {
    std::ostringstream out;
    out << "Measure table columns\n"
        << "=====================\n"
        << "subject              participant id (from the trial file)\n"
        << "order                presentation rank within subject, strictly increasing\n"
        << "block                block id, passed through\n"
        << "session              session id, passed through\n"
        << "stimulus             letter string shown on the trial\n"
        << "lexicality           W for word stimuli, N for nonwords\n"
        << "response             participant response, W or N\n"
        << "rt_ms                reaction time in milliseconds, filtered to (100, 2000]\n"
        << "semantic_density     mean cosine similarity of the predicted semantic vector\n"
        << "                     to its closest word embeddings\n"
        << "shortest_path        length of the shortest closed tour through the predicted\n"
        << "                     vectors of the stimulus and its one-letter neighbours;\n"
        << "                     0 when the stimulus has no such neighbours\n"
        << "has_neighbours_path  1 when shortest_path is defined, else 0\n"
        << "c_precision          correlation between the stimulus' trigram vector and the\n"
        << "                     form vector predicted back from meaning\n"
        << "l1chat               L1 norm of that predicted form vector\n"
        << "yes_activation       support for a word response from the decision mapping\n"
        << "                     (identically 0 without trial-by-trial learning)\n"
        << "word_length          stimulus length in letters\n"
        << "frequency            raw corpus count, 0 when absent\n"
        << "in_bnc               1 when frequency > 0\n"
        << "neighborhood_size    count of reference words at edit distance 1\n"
        << "dropped_cues         stimulus trigrams unknown to the lexicon's cue index\n"
        << "\n"
        << "Derived regression columns (built per subject, in memory)\n"
        << "---------------------------------------------------------\n"
        << "rtinv = -1000 / rt_ms\n"
        << "trial_z = order, centered and scaled per subject (n-1 sd)\n"
        << "log_* = natural log, with 0 mapped to log(0.002)\n"
        << "in_bnc / has_neighbours / has_neighbours_path = 1 iff the raw value is nonzero\n"
        << "response_w = 1 for a word response\n";
    write_text_atomic(path, out.str());
}

EmbeddingTable load_embeddings(const std::string& path) {
    const auto lines = read_lines(path);
    std::size_t first = 0;
    std::int64_t declared_count = -1;
    std::int64_t declared_dim = -1;

    // Optional "count dim" header: two integer tokens on the first line.
    if (!lines.empty()) {
        auto toks = split_ws(lines[0]);
        if (toks.size() == 2) {
            std::int64_t a = 0, b = 0;
            auto r1 = std::from_chars(toks[0].data(), toks[0].data() + toks[0].size(), a);
            auto r2 = std::from_chars(toks[1].data(), toks[1].data() + toks[1].size(), b);
            if (r1.ec == std::errc() && r1.ptr == toks[0].data() + toks[0].size() &&
                r2.ec == std::errc() && r2.ptr == toks[1].data() + toks[1].size()) {
                declared_count = a;
                declared_dim = b;
                first = 1;
            }
        }
    }

    std::vector<std::string> words;
    std::vector<std::vector<double>> rows;
    std::size_t dim = 0;
    for (std::size_t li = first; li < lines.size(); ++li) {
        if (detail::trim(lines[li]).empty()) continue;
        const std::size_t line_no = li + 1;
        auto toks = split_ws(lines[li]);
        if (toks.size() < 2)
            throw ParseError(path, line_no, "expected a word followed by its vector");
        if (dim == 0) {
            dim = toks.size() - 1;
        } else if (toks.size() - 1 != dim) {
            throw ParseError(path, line_no,
                             "dimension mismatch: expected " + std::to_string(dim) + ", got " +
                                 std::to_string(toks.size() - 1));
        }
        words.push_back(toks[0]);
        std::vector<double> row(dim);
        for (std::size_t j = 0; j < dim; ++j)
            row[j] = parse_double(toks[j + 1], path, line_no, "embedding value");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw EmptyInputError("no embeddings in " + path);
    if (declared_count >= 0 && declared_count != static_cast<std::int64_t>(rows.size()))
        throw ParseError(path, 1,
                         "header declares " + std::to_string(declared_count) + " entries, file " +
                             "has " + std::to_string(rows.size()));
    if (declared_dim >= 0 && declared_dim != static_cast<std::int64_t>(dim))
        throw ParseError(path, 1, "header declares dimension " + std::to_string(declared_dim) +
                                      ", file has " + std::to_string(dim));

    Eigen::MatrixXd mat(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < dim; ++j)
            mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return EmbeddingTable(std::move(mat), std::move(words));
}

void write_embeddings(const EmbeddingTable& table, const std::string& path) {
    std::ostringstream out;
    out << table.size() << ' ' << table.dim() << '\n';
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << table.word(i);
        for (Eigen::Index j = 0; j < table.dim(); ++j)
            out << ' ' << fmt12(table.matrix()(static_cast<Eigen::Index>(i), j));
        out << '\n';
    }
    write_text_atomic(path, out.str());
}

std::unordered_map<std::string, double> load_frequencies(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || split_csv(lines[0]) != std::vector<std::string>{"word", "count"})
        throw ParseError(path, 1, "expected header word,count");
    std::unordered_map<std::string, double> out;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (detail::trim(lines[li]).empty()) continue;
        const std::size_t line_no = li + 1;
        auto f = split_csv(lines[li]);
        if (f.size() != 2)
            throw ParseError(path, line_no, "expected 2 fields, got " +
                                                std::to_string(f.size()));
        const double count = parse_double(f[1], path, line_no, "count");
        if (count < 0.0) throw ParseError(path, line_no, "count must be non-negative");
        if (!out.emplace(f[0], count).second)
            throw DuplicateEntryError("duplicate frequency entry: " + f[0]);
    }
    return out;
}

void write_frequencies(const std::vector<std::pair<std::string, double>>& entries,
                       const std::string& path) {
    std::ostringstream out;
    out << "word,count\n";
    for (const auto& [word, count] : entries) out << word << ',' << fmt12(count) << '\n';
    write_text_atomic(path, out.str());
}

std::vector<std::string> load_wordlist(const std::string& path) {
    const auto lines = read_lines(path);
    std::vector<std::string> words;
    for (const auto& line : lines) {
        auto w = detail::trim(line);
        if (!w.empty()) words.push_back(std::move(w));
    }
    if (words.empty()) throw EmptyInputError("no words in " + path);
    return words;
}

void write_wordlist(const std::vector<std::string>& words, const std::string& path) {
    std::ostringstream out;
    for (const auto& w : words) out << w << '\n';
    write_text_atomic(path, out.str());
}

} // namespace ldsim
