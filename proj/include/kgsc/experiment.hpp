#pragma once
// Experiment harness: flat key=value configs, seeded sweep pipelines, CSV
// output.
//
// Per-trial randomness comes from derive_rng(seed, sweep index, trial index),
// so trials are order-independent and may run on any number of threads while
// producing byte-identical CSVs. The correction on/off switch sits after all
// channel randomness, which makes ablation arms exactly paired.
//
// CSV schema (fixed):
//   pipeline,sweep,trials,sim_mean,bleu_mean,ter,bits_semantic,bits_fixed7,bits_huffman,seed
//
// Pipelines:
//   single_user_bsc/awgn/rayleigh  align -> encode -> BCC -> channel ->
//                                  Viterbi -> correct -> verbalize -> metrics
//   ablation_inference             the same sweep twice, correction on and
//                                  off, rows labelled *_on / *_off
//   multi_user                     one symbol per user over a shared channel,
//                                  private-graph recovery per user; ter column
//                                  holds 1 - assignment accuracy
//   compression                    source-bit accounting only; sim/bleu/ter
//                                  columns are not populated (written as 0)

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "align.hpp"
#include "channel.hpp"
#include "embedding.hpp"
#include "kg.hpp"
#include "metrics.hpp"
#include "receiver.hpp"
#include "rng.hpp"
#include "service.hpp"
#include "source_coding.hpp"

namespace kgsc {

enum class Pipeline {
    single_user_bsc,
    single_user_awgn,
    single_user_rayleigh,
    ablation_inference,
    multi_user,
    compression,
};

inline const char* pipeline_name(Pipeline p) {
    switch (p) {
        case Pipeline::single_user_bsc: return "single_user_bsc";
        case Pipeline::single_user_awgn: return "single_user_awgn";
        case Pipeline::single_user_rayleigh: return "single_user_rayleigh";
        case Pipeline::ablation_inference: return "ablation_inference";
        case Pipeline::multi_user: return "multi_user";
        case Pipeline::compression: return "compression";
    }
    return "?";
}

struct ExperimentConfig {
    Pipeline pipeline = Pipeline::single_user_bsc;
    std::vector<double> sweep;
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
    bool correction = true;
    ChannelModel::Kind channel = ChannelModel::Kind::bsc;  // multi_user / ablation
    std::string kg_path, synonyms_path, corpus_path, templates_path, model_path, out_path;
    std::vector<std::string> private_kg_paths;
    std::size_t parallel = 1;
    std::string verbalizer_url, embedder_url;  // optional host:port services
};

struct ResultRow {
    std::string pipeline;
    double sweep = 0.0;
    std::size_t trials = 0;
    double sim_mean = 0.0;
    double bleu_mean = 0.0;
    double ter = 0.0;
    double bits_semantic = 0.0;
    double bits_fixed7 = 0.0;
    double bits_huffman = 0.0;
    std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// Config file: one `key = value` per line, '#' comments. Unknown keys error.

namespace detail {

inline std::string trim(std::string s) {
    const auto is_space = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.front())) s.erase(s.begin());
    while (!s.empty() && is_space(s.back())) s.pop_back();
    return s;
}

inline std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(value);
    while (std::getline(in, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

inline double parse_double(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::runtime_error("config: bad number for '" + key + "': " + value);
    }
}

inline std::uint64_t parse_u64(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        const auto v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::runtime_error("config: bad integer for '" + key + "': " + value);
    }
}

inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: expected key = value at line " + std::to_string(line_no));
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::runtime_error("config: empty key at line " + std::to_string(line_no));
        if (!kv.emplace(key, value).second)
            throw std::runtime_error("config: duplicate key '" + key + "' at line " + std::to_string(line_no));
    }
    return kv;
}

inline void require_file(const std::string& path, const std::string& key) {
    if (path.empty()) throw std::runtime_error("config: missing required path '" + key + "'");
    if (!std::filesystem::exists(path)) throw std::runtime_error("config: file not found for '" + key + "': " + path);
}

}  // namespace detail

inline ExperimentConfig load_experiment_config(std::istream& in) {
    const auto kv = detail::parse_key_values(in);
    ExperimentConfig cfg;
    for (const auto& [key, value] : kv) {
        if (key == "pipeline") {
            if (value == "single_user_bsc") cfg.pipeline = Pipeline::single_user_bsc;
            else if (value == "single_user_awgn") cfg.pipeline = Pipeline::single_user_awgn;
            else if (value == "single_user_rayleigh") cfg.pipeline = Pipeline::single_user_rayleigh;
            else if (value == "ablation_inference") cfg.pipeline = Pipeline::ablation_inference;
            else if (value == "multi_user") cfg.pipeline = Pipeline::multi_user;
            else if (value == "compression") cfg.pipeline = Pipeline::compression;
            else throw std::runtime_error("config: unknown pipeline '" + value + "'");
        } else if (key == "sweep") {
            for (const auto& item : detail::split_list(value)) cfg.sweep.push_back(detail::parse_double(item, key));
        } else if (key == "trials") {
            cfg.trials = detail::parse_u64(value, key);
        } else if (key == "seed") {
            cfg.seed = detail::parse_u64(value, key);
        } else if (key == "correction") {
            if (value == "on") cfg.correction = true;
            else if (value == "off") cfg.correction = false;
            else throw std::runtime_error("config: correction must be on/off");
        } else if (key == "channel") {
            if (value == "bsc") cfg.channel = ChannelModel::Kind::bsc;
            else if (value == "awgn") cfg.channel = ChannelModel::Kind::awgn;
            else if (value == "rayleigh") cfg.channel = ChannelModel::Kind::rayleigh;
            else throw std::runtime_error("config: unknown channel '" + value + "'");
        } else if (key == "kg") cfg.kg_path = value;
        else if (key == "synonyms") cfg.synonyms_path = value;
        else if (key == "corpus") cfg.corpus_path = value;
        else if (key == "templates") cfg.templates_path = value;
        else if (key == "model") cfg.model_path = value;
        else if (key == "out") cfg.out_path = value;
        else if (key == "private_kgs") cfg.private_kg_paths = detail::split_list(value);
        else if (key == "parallel") cfg.parallel = detail::parse_u64(value, key);
        else if (key == "verbalizer_url") cfg.verbalizer_url = value;
        else if (key == "embedder_url") cfg.embedder_url = value;
        else throw std::runtime_error("config: unknown key '" + key + "'");
    }
    return cfg;
}

inline ExperimentConfig load_experiment_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    return load_experiment_config(in);
}

inline void validate_config(const ExperimentConfig& cfg) {
    if (cfg.sweep.empty()) throw std::runtime_error("config: sweep grid must be non-empty");
    if (cfg.trials < 1) throw std::runtime_error("config: trials must be >= 1");
    detail::require_file(cfg.kg_path, "kg");
    detail::require_file(cfg.synonyms_path, "synonyms");
    detail::require_file(cfg.corpus_path, "corpus");
    detail::require_file(cfg.templates_path, "templates");
    const bool needs_model = cfg.pipeline == Pipeline::ablation_inference ||
                             (cfg.correction && cfg.pipeline != Pipeline::compression);
    if (needs_model) detail::require_file(cfg.model_path, "model");
    else if (!cfg.model_path.empty()) detail::require_file(cfg.model_path, "model");
    if (cfg.pipeline == Pipeline::multi_user) {
        if (cfg.private_kg_paths.size() < 2) throw std::runtime_error("config: multi_user needs >= 2 private_kgs");
        for (const auto& p : cfg.private_kg_paths) detail::require_file(p, "private_kgs");
    }
    if (cfg.pipeline == Pipeline::single_user_bsc ||
        (cfg.channel == ChannelModel::Kind::bsc &&
         (cfg.pipeline == Pipeline::ablation_inference || cfg.pipeline == Pipeline::multi_user))) {
        for (double p : cfg.sweep)
            if (!(p >= 0.0 && p <= 1.0)) throw std::runtime_error("config: BSC sweep values must lie in [0,1]");
    }
}

// ---------------------------------------------------------------------------
// Runner.

namespace detail {

struct PreparedLine {
    std::string sentence;
    std::vector<Triplet> triplets;
    BitVector frame;  // concatenated symbol codewords
    std::size_t bits_fixed7 = 0;
    std::size_t bits_huffman = 0;
};

struct RunContext {
    KnowledgeGraph kg;
    SynonymTable synonyms;
    TemplateTable templates;
    Codebook cb;
    HuffmanTable huffman;
    std::optional<ComplExModel> model;
    ConvCode code;
    std::vector<PreparedLine> lines;       // alignable corpus lines
    std::vector<PreparedLine> all_lines;   // every corpus sentence (compression)
    std::vector<KnowledgeGraph> private_kgs;
    std::vector<std::vector<std::size_t>> user_lines;  // per user, indexes into `lines`
    std::optional<ExternalServiceClient> verbalizer;
    std::optional<ExternalServiceClient> embedder;
    std::unique_ptr<std::mutex> service_mutex = std::make_unique<std::mutex>();
};

inline ExternalServiceClient make_client(const std::string& url) {
    std::string hostport = url;
    if (hostport.rfind("http://", 0) == 0) hostport = hostport.substr(7);
    const auto colon = hostport.rfind(':');
    if (colon == std::string::npos) throw std::runtime_error("service url must be host:port, got " + url);
    return ExternalServiceClient(hostport.substr(0, colon),
                                 static_cast<int>(parse_u64(hostport.substr(colon + 1), "service port")));
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline RunContext prepare(const ExperimentConfig& cfg) {
    RunContext ctx;
    ctx.kg = KnowledgeGraph::load_file(cfg.kg_path);
    ctx.synonyms = SynonymTable::load_file(cfg.synonyms_path);
    ctx.templates = TemplateTable::load_file(cfg.templates_path);
    ctx.cb = build_codebook(ctx.kg);
    if (!cfg.model_path.empty()) ctx.model = ComplExModel::load_file(cfg.model_path);
    if (!cfg.verbalizer_url.empty()) ctx.verbalizer = make_client(cfg.verbalizer_url);
    if (!cfg.embedder_url.empty()) ctx.embedder = make_client(cfg.embedder_url);

    const std::string corpus_text = read_file(cfg.corpus_path);
    ctx.huffman = HuffmanTable::build(corpus_text);

    std::istringstream corpus(corpus_text);
    std::string line;
    while (std::getline(corpus, line)) {
        if (line.empty()) continue;
        for (auto& msg : align(line, ctx.kg, ctx.synonyms)) {
            PreparedLine pl;
            pl.sentence = msg.sentence;
            pl.triplets = msg.triplets;
            for (const auto& t : pl.triplets) {
                const auto bits = encode_symbol(t, ctx.cb);
                pl.frame.insert(pl.frame.end(), bits.begin(), bits.end());
            }
            pl.bits_fixed7 = 7 * pl.sentence.size();
            pl.bits_huffman = ctx.huffman.encoded_length(pl.sentence);
            ctx.all_lines.push_back(pl);
            if (!pl.triplets.empty()) ctx.lines.push_back(std::move(pl));
        }
    }
    if (cfg.pipeline != Pipeline::compression && ctx.lines.empty())
        throw std::runtime_error("corpus has no alignable sentences");

    if (cfg.pipeline == Pipeline::multi_user) {
        for (const auto& path : cfg.private_kg_paths) {
            std::ifstream in(path);
            if (!in) throw std::runtime_error("cannot open " + path);
            ctx.private_kgs.push_back(KnowledgeGraph::subset(ctx.kg, load_triplets(in, ctx.kg)));
            if (ctx.private_kgs.back().empty()) throw std::runtime_error("private kg is empty: " + path);
        }
        ctx.user_lines.resize(ctx.private_kgs.size());
        for (std::size_t i = 0; i < ctx.lines.size(); ++i)
            for (std::size_t u = 0; u < ctx.private_kgs.size(); ++u)
                if (ctx.private_kgs[u].contains(ctx.lines[i].triplets.front())) {
                    ctx.user_lines[u].push_back(i);
                    break;
                }
        for (std::size_t u = 0; u < ctx.user_lines.size(); ++u)
            if (ctx.user_lines[u].empty())
                throw std::runtime_error("no corpus line belongs to user " + std::to_string(u));
    }
    return ctx;
}

struct TrialMetrics {
    double sim = 0.0, bleu = 0.0, ter = 0.0;
    double bits_semantic = 0.0, bits_fixed7 = 0.0, bits_huffman = 0.0;
};

// Verbalization with the optional external service; template fallback on any
// service failure (the warning stays recorded on the client).
inline std::string render_text(RunContext& ctx, const std::vector<Triplet>& triplets) {
    if (triplets.empty()) return {};
    if (ctx.verbalizer) {
        std::vector<std::array<std::string, 3>> labels;
        for (const auto& t : triplets)
            labels.push_back({ctx.kg.entity_label(t.head), ctx.kg.relation_label(t.relation),
                              ctx.kg.entity_label(t.tail)});
        std::lock_guard<std::mutex> lock(*ctx.service_mutex);
        if (auto texts = ctx.verbalizer->verbalize(labels)) {
            std::string joined;
            for (const auto& s : *texts) {
                if (!joined.empty()) joined.push_back(' ');
                joined += s;
            }
            return joined;
        }
    }
    std::string joined;
    for (const auto& t : triplets) {
        if (!joined.empty()) joined.push_back(' ');
        joined += verbalize(t, ctx.kg, ctx.templates);
    }
    return joined;
}

inline double score_similarity(RunContext& ctx, const std::string& original, const std::string& recovered) {
    if (recovered.empty()) return 0.0;
    if (ctx.embedder) {
        std::lock_guard<std::mutex> lock(*ctx.service_mutex);
        if (auto vectors = ctx.embedder->embed({original, recovered})) {
            const auto& a = (*vectors)[0];
            const auto& b = (*vectors)[1];
            if (a.size() == b.size() && !a.empty()) {
                double dot = 0, na = 0, nb = 0;
                for (std::size_t i = 0; i < a.size(); ++i) {
                    dot += a[i] * b[i];
                    na += a[i] * a[i];
                    nb += b[i] * b[i];
                }
                if (na > 0 && nb > 0) return a == b ? 1.0 : dot / (std::sqrt(na) * std::sqrt(nb));
            }
        }
    }
    return similarity(original, recovered);
}

// One end-to-end trial of the single-user chain over one corpus sentence.
inline TrialMetrics single_user_trial(RunContext& ctx, const PreparedLine& line, const ChannelModel& channel,
                                      bool correction, Rng& rng) {
    const auto coded = ctx.code.encode(line.frame);
    const auto observed = transmit(coded, channel, rng, ctx.code.rate());
    const auto decoded = viterbi_decode(ctx.code, observed);

    const unsigned sw = ctx.cb.symbol_width();
    std::vector<Triplet> finals;
    std::vector<Triplet> renderable;
    for (std::size_t i = 0; i < line.triplets.size(); ++i) {
        const BitVector sym(decoded.begin() + i * sw, decoded.begin() + (i + 1) * sw);
        if (correction) {
            finals.push_back(correct(sym, ctx.cb, ctx.kg, *ctx.model));
            renderable.push_back(finals.back());
        } else {
            const auto d = decode_symbol(sym, ctx.cb, ctx.kg);
            finals.push_back(d.raw);
            if (d.valid()) renderable.push_back(d.raw);
        }
    }

    TrialMetrics m;
    m.ter = triplet_error_rate(line.triplets, finals);
    const std::string recovered = render_text(ctx, renderable);
    m.sim = score_similarity(ctx, line.sentence, recovered);
    m.bleu = recovered.empty() ? 0.0 : bleu(recovered, line.sentence);
    m.bits_semantic = static_cast<double>(line.frame.size());
    m.bits_fixed7 = static_cast<double>(line.bits_fixed7);
    m.bits_huffman = static_cast<double>(line.bits_huffman);
    return m;
}

// One multi-user trial: each user contributes the first symbol of their line,
// the stream crosses one shared channel, every receiver corrects all symbols
// and keeps the one closest to its private graph. The ter field records
// 1 - assignment accuracy.
inline TrialMetrics multi_user_trial(RunContext& ctx, std::size_t trial, const ChannelModel& channel,
                                     bool correction, Rng& rng) {
    const std::size_t n_users = ctx.private_kgs.size();
    std::vector<const PreparedLine*> chosen(n_users);
    BitVector frame;
    std::vector<Triplet> sent(n_users);
    for (std::size_t u = 0; u < n_users; ++u) {
        const auto& idx = ctx.user_lines[u];
        chosen[u] = &ctx.lines[idx[trial % idx.size()]];
        sent[u] = chosen[u]->triplets.front();
        const auto bits = encode_symbol(sent[u], ctx.cb);
        frame.insert(frame.end(), bits.begin(), bits.end());
    }

    const auto coded = ctx.code.encode(frame);
    const auto observed = transmit(coded, channel, rng, ctx.code.rate());
    const auto decoded = viterbi_decode(ctx.code, observed);

    const unsigned sw = ctx.cb.symbol_width();
    std::vector<Triplet> finals(n_users);
    for (std::size_t u = 0; u < n_users; ++u) {
        const BitVector sym(decoded.begin() + u * sw, decoded.begin() + (u + 1) * sw);
        finals[u] = correction ? correct(sym, ctx.cb, ctx.kg, *ctx.model)
                               : decode_symbol(sym, ctx.cb, ctx.kg).raw;
    }

    TrialMetrics m;
    std::size_t correct_assignments = 0;
    for (std::size_t u = 0; u < n_users; ++u) {
        const auto recovery = recover_for_user(finals, ctx.private_kgs[u], ctx.cb);
        if (recovery.index == u && recovery.symbol == sent[u]) ++correct_assignments;
        std::string recovered;
        const auto& sym = recovery.symbol;
        if (sym.head < ctx.kg.n_entities() && sym.tail < ctx.kg.n_entities() &&
            sym.relation < ctx.kg.n_relations())
            recovered = render_text(ctx, {sym});
        m.sim += score_similarity(ctx, chosen[u]->sentence, recovered);
        m.bleu += recovered.empty() ? 0.0 : bleu(recovered, chosen[u]->sentence);
        m.bits_fixed7 += static_cast<double>(chosen[u]->bits_fixed7);
        m.bits_huffman += static_cast<double>(chosen[u]->bits_huffman);
    }
    m.sim /= static_cast<double>(n_users);
    m.bleu /= static_cast<double>(n_users);
    m.ter = 1.0 - static_cast<double>(correct_assignments) / static_cast<double>(n_users);
    m.bits_semantic = static_cast<double>(frame.size());
    return m;
}

inline ChannelModel make_channel(ChannelModel::Kind kind, double value) {
    switch (kind) {
        case ChannelModel::Kind::bsc: return ChannelModel::bsc(value);
        case ChannelModel::Kind::awgn: return ChannelModel::awgn(value);
        case ChannelModel::Kind::rayleigh: return ChannelModel::rayleigh(value);
    }
    throw std::logic_error("unknown channel kind");
}

inline ResultRow sweep_point(RunContext& ctx, const ExperimentConfig& cfg, std::string row_name,
                             ChannelModel::Kind channel_kind, double sweep_value, std::size_t sweep_index,
                             bool correction) {
    const auto channel = make_channel(channel_kind, sweep_value);
    std::vector<TrialMetrics> results(cfg.trials);

    // Services keep per-call connections but share a warning log, so trials
    // stay sequential when one is configured.
    const std::size_t threads = (ctx.verbalizer || ctx.embedder) ? 1 : std::max<std::size_t>(1, cfg.parallel);
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t trial = begin; trial < end; ++trial) {
            try {
                auto rng = derive_rng(cfg.seed, sweep_index, trial);
                if (cfg.pipeline == Pipeline::multi_user)
                    results[trial] = multi_user_trial(ctx, trial, channel, correction, rng);
                else
                    results[trial] =
                        single_user_trial(ctx, ctx.lines[trial % ctx.lines.size()], channel, correction, rng);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::make_exception_ptr(std::runtime_error(
                        "trial failed at (sweep " + std::to_string(sweep_index) + ", trial " +
                        std::to_string(trial) + "): " + e.what()));
                return;
            }
        }
    };

    if (threads <= 1) {
        run_range(0, cfg.trials);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (cfg.trials + threads - 1) / threads;
        for (std::size_t k = 0; k < threads; ++k) {
            const std::size_t begin = k * chunk;
            const std::size_t end = std::min(cfg.trials, begin + chunk);
            if (begin < end) pool.emplace_back(run_range, begin, end);
        }
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    ResultRow row;
    row.pipeline = std::move(row_name);
    row.sweep = sweep_value;
    row.trials = cfg.trials;
    row.seed = cfg.seed;
    for (const auto& m : results) {  // fixed accumulation order
        row.sim_mean += m.sim;
        row.bleu_mean += m.bleu;
        row.ter += m.ter;
        row.bits_semantic += m.bits_semantic;
        row.bits_fixed7 += m.bits_fixed7;
        row.bits_huffman += m.bits_huffman;
    }
    const auto n = static_cast<double>(cfg.trials);
    row.sim_mean /= n;
    row.bleu_mean /= n;
    row.ter /= n;
    row.bits_semantic /= n;
    row.bits_fixed7 /= n;
    row.bits_huffman /= n;
    return row;
}

inline ResultRow compression_row(RunContext& ctx, const ExperimentConfig& cfg, double sweep_value) {
    ResultRow row;
    row.pipeline = pipeline_name(Pipeline::compression);
    row.sweep = sweep_value;
    row.trials = cfg.trials;
    row.seed = cfg.seed;
    if (ctx.all_lines.empty()) throw std::runtime_error("compression: empty corpus");
    for (const auto& line : ctx.all_lines) {
        row.bits_semantic += static_cast<double>(line.frame.size());
        row.bits_fixed7 += static_cast<double>(line.bits_fixed7);
        row.bits_huffman += static_cast<double>(line.bits_huffman);
    }
    const auto n = static_cast<double>(ctx.all_lines.size());
    row.bits_semantic /= n;
    row.bits_fixed7 /= n;
    row.bits_huffman /= n;
    return row;
}

}  // namespace detail

inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string to_csv(const std::vector<ResultRow>& rows) {
    std::string out = "pipeline,sweep,trials,sim_mean,bleu_mean,ter,bits_semantic,bits_fixed7,bits_huffman,seed\n";
    for (const auto& r : rows) {
        out += r.pipeline;
        out += ',' + format_number(r.sweep);
        out += ',' + std::to_string(r.trials);
        out += ',' + format_number(r.sim_mean);
        out += ',' + format_number(r.bleu_mean);
        out += ',' + format_number(r.ter);
        out += ',' + format_number(r.bits_semantic);
        out += ',' + format_number(r.bits_fixed7);
        out += ',' + format_number(r.bits_huffman);
        out += ',' + std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

// Runs every sweep point of the configured pipeline and, when `out` is set,
// writes the CSV. Service degradation warnings are appended to *warnings.
inline std::vector<ResultRow> run(const ExperimentConfig& cfg, std::vector<ServiceWarning>* warnings = nullptr) {
    validate_config(cfg);
    auto ctx = detail::prepare(cfg);
    if ((cfg.correction || cfg.pipeline == Pipeline::ablation_inference) && cfg.pipeline != Pipeline::compression &&
        !ctx.model)
        throw std::runtime_error("correction requires a model checkpoint");

    std::vector<ResultRow> rows;
    for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
        const double value = cfg.sweep[i];
        switch (cfg.pipeline) {
            case Pipeline::compression:
                rows.push_back(detail::compression_row(ctx, cfg, value));
                break;
            case Pipeline::ablation_inference:
                rows.push_back(detail::sweep_point(ctx, cfg, "ablation_inference_on", cfg.channel, value, i, true));
                rows.push_back(detail::sweep_point(ctx, cfg, "ablation_inference_off", cfg.channel, value, i, false));
                break;
            case Pipeline::multi_user:
                rows.push_back(
                    detail::sweep_point(ctx, cfg, pipeline_name(cfg.pipeline), cfg.channel, value, i, cfg.correction));
                break;
            case Pipeline::single_user_bsc:
                rows.push_back(detail::sweep_point(ctx, cfg, pipeline_name(cfg.pipeline), ChannelModel::Kind::bsc,
                                                   value, i, cfg.correction));
                break;
            case Pipeline::single_user_awgn:
                rows.push_back(detail::sweep_point(ctx, cfg, pipeline_name(cfg.pipeline), ChannelModel::Kind::awgn,
                                                   value, i, cfg.correction));
                break;
            case Pipeline::single_user_rayleigh:
                rows.push_back(detail::sweep_point(ctx, cfg, pipeline_name(cfg.pipeline),
                                                   ChannelModel::Kind::rayleigh, value, i, cfg.correction));
                break;
        }
    }

    if (warnings) {
        if (ctx.verbalizer)
            warnings->insert(warnings->end(), ctx.verbalizer->warnings().begin(), ctx.verbalizer->warnings().end());
        if (ctx.embedder)
            warnings->insert(warnings->end(), ctx.embedder->warnings().begin(), ctx.embedder->warnings().end());
    }

    if (!cfg.out_path.empty()) {
        std::ofstream out(cfg.out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + cfg.out_path);
        out << to_csv(rows);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Embedding-training config for the CLI (same key=value format).

struct TrainRunConfig {
    std::string kg_path;
    std::string model_out;
    TrainConfig train;
};

inline TrainRunConfig load_train_config(std::istream& in) {
    const auto kv = detail::parse_key_values(in);
    TrainRunConfig cfg;
    for (const auto& [key, value] : kv) {
        if (key == "kg") cfg.kg_path = value;
        else if (key == "model_out") cfg.model_out = value;
        else if (key == "steps") cfg.train.steps = detail::parse_u64(value, key);
        else if (key == "learning_rate") cfg.train.learning_rate = detail::parse_double(value, key);
        else if (key == "dimension") cfg.train.dimension = detail::parse_u64(value, key);
        else if (key == "negatives_per_positive") cfg.train.negatives_per_positive = detail::parse_u64(value, key);
        else if (key == "batch_size") cfg.train.batch_size = detail::parse_u64(value, key);
        else if (key == "regularization_weight") cfg.train.regularization_weight = detail::parse_double(value, key);
        else if (key == "seed") cfg.train.seed = detail::parse_u64(value, key);
        else throw std::runtime_error("train config: unknown key '" + key + "'");
    }
    detail::require_file(cfg.kg_path, "kg");
    if (cfg.model_out.empty()) throw std::runtime_error("train config: missing 'model_out'");
    return cfg;
}

inline TrainRunConfig load_train_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    return load_train_config(in);
}

}  // namespace kgsc
