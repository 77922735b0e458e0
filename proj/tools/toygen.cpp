// Generates the bundled toy dataset: a small lexicon with known neighbour
// clusters, random-but-reproducible embeddings, Zipf-ish frequencies, and
// two subjects' worth of lexical-decision trials (including a few rows the
// loader is expected to filter out). Only this generator consumes the seed;
// the simulation itself is deterministic.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ldsim/dataio.hpp"
#include "ldsim/formspace.hpp"

namespace {

const std::vector<std::string> kWords = {
    "back", "lack", "tack", "sack", "pack", "rack",
    "bank", "tank", "rank", "sank",
    "cat",  "bat",  "hat",  "mat",  "rat",
    "can",  "ban",  "man",  "pan",  "ran",
    "dog",  "dot",  "don",  "dock",
    "card", "cart", "care", "carp",
    "lamp", "land", "lane", "lank",
    "mill", "mild", "mile", "milk",
    "tree", "free", "story", "house",
};

const std::vector<std::string> kNonwords = {
    "bick", "tark", "sask", "pake", "ruck", "bonk", "tain",
    "gat",  "vat",  "wan",  "kan",  "dob",  "dat",
    "carn", "lamk", "mell", "milt", "trew", "frue", "hact",
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toy dataset generator for the simulation pipeline"};
    std::string out_dir = "data/toy";
    std::uint64_t seed = 1337;
    int n_subjects = 2;
    int n_trials = 280;
    int dim = 16;
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--seed", seed, "RNG seed")->capture_default_str();
    app.add_option("--subjects", n_subjects, "Subjects to generate")->capture_default_str();
    app.add_option("--trials", n_trials, "Main trials per subject")->capture_default_str();
    app.add_option("--dim", dim, "Embedding dimension")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    try {
        std::filesystem::create_directories(out_dir);
        std::mt19937_64 rng(seed);

        // Every nonword must share at least one trigram with the lexicon,
        // or the simulation would skip it.
        const ldsim::CueMatrix cues = ldsim::CueMatrix::build(kWords);
        for (const auto& nw : kNonwords) {
            if (ldsim::encode_form(nw, cues.index()).vec.empty())
                throw ldsim::Error("nonword shares no trigram with the lexicon: " + nw);
            if (cues.word_id(nw)) throw ldsim::Error("nonword is in the lexicon: " + nw);
        }

        ldsim::write_wordlist(kWords, out_dir + "/lexicon.txt");

        // Embeddings: a shared positive direction plus noise, so cosine
        // neighbourhoods stay positive and logs are safe.
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double base = 1.0 / std::sqrt(static_cast<double>(dim));
        Eigen::MatrixXd emb(static_cast<Eigen::Index>(kWords.size()), dim);
        for (Eigen::Index i = 0; i < emb.rows(); ++i)
            for (Eigen::Index j = 0; j < emb.cols(); ++j)
                emb(i, j) = base + 0.35 * gauss(rng);
        ldsim::write_embeddings(ldsim::EmbeddingTable(emb, kWords), out_dir + "/embeddings.txt");

        // Zipf-ish counts over a shuffled rank order; a few words stay
        // out of the table entirely (frequency 0 downstream).
        std::vector<std::size_t> rank(kWords.size());
        std::iota(rank.begin(), rank.end(), 0);
        std::shuffle(rank.begin(), rank.end(), rng);
        std::vector<std::pair<std::string, double>> freqs;
        for (std::size_t i = 0; i < kWords.size(); ++i) {
            if (rank[i] >= kWords.size() - 4) continue; // absent from the table
            freqs.emplace_back(kWords[i],
                               std::floor(2000.0 / std::pow(double(rank[i]) + 1.0, 0.9)));
        }
        ldsim::write_frequencies(freqs, out_dir + "/frequencies.csv");

        // Trials. Orders increase across everything we emit, including the
        // rows the loader must drop.
        std::ostringstream trials;
        trials << "subject,order,block,session,stimulus,lexicality,response,rt_ms\n";
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::normal_distribution<double> log_rt(6.45, 0.25);
        std::uniform_int_distribution<std::size_t> word_pick(0, kWords.size() - 1);
        std::uniform_int_distribution<std::size_t> nonword_pick(0, kNonwords.size() - 1);

        for (int subject = 1; subject <= n_subjects; ++subject) {
            std::uint64_t order = 0;
            auto emit = [&](const std::string& stimulus, char lex, const std::string& resp,
                            const std::string& rt) {
                ++order;
                const int block = 1 + static_cast<int>((order - 1) / 96);
                const int session = order <= static_cast<std::uint64_t>(n_trials) / 2 ? 1 : 2;
                trials << subject << ',' << order << ',' << block << ',' << session << ','
                       << stimulus << ',' << lex << ',' << resp << ',' << rt << '\n';
            };
            auto draw_rt = [&] {
                double rt = std::exp(log_rt(rng));
                rt = std::clamp(rt, 150.0, 1990.0);
                std::ostringstream s;
                s.precision(1);
                s << std::fixed << rt;
                return s.str();
            };

            for (int t = 0; t < n_trials; ++t) {
                const bool word_trial = unit(rng) < 0.5;
                const std::string& stim =
                    word_trial ? kWords[word_pick(rng)] : kNonwords[nonword_pick(rng)];
                const char lex = word_trial ? 'W' : 'N';
                const bool correct = unit(rng) < (word_trial ? 0.92 : 0.9);
                const char resp = correct == word_trial ? 'W' : 'N';
                emit(stim, lex, std::string(1, resp), draw_rt());
            }

            // Rows exercising the loader's filters and the skip log.
            emit("null", 'W', "W", "640.0");       // removed: null stimulus
            emit("nan", 'N', "N", "701.0");        // removed: nan stimulus
            emit("back", 'W', "", "");             // removed: timeout (no response)
            emit("cat", 'W', "W", "90");           // removed: rt <= 100
            emit("milk", 'W', "W", "100");         // removed: rt <= 100 (boundary)
            emit("tree", 'W', "W", "2500");        // removed: rt > 2000
            emit("house", 'W', "W", "2000");       // kept: boundary rt
            emit("zebra", 'W', "W", "655.0");      // kept by loader, skipped in simulation
            emit("xqzwv", 'N', "N", "712.0");      // kept by loader, no known cues
        }
        {
            std::ofstream out(out_dir + "/trials.csv", std::ios::binary | std::ios::trunc);
            if (!out) throw ldsim::IoError("cannot write " + out_dir + "/trials.csv");
            out << trials.str();
        }
        std::cout << "wrote " << out_dir << "/{lexicon.txt,embeddings.txt,frequencies.csv,"
                  << "trials.csv} (seed " << seed << ")\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
