#pragma once
// ComplEx knowledge graph embeddings: scoring, SGD training with filtered
// negative sampling, link-prediction ranking, and checkpoint IO.
//
// score(h, r, t) = Re( sum_k e_h[k] * w_r[k] * conj(e_t[k]) )
//               = <hr, rr, tr> + <hi, ri, ti> + <hr, ri, ti*>... expanded below
// with per-example logistic loss  log(1 + exp(-y * score)),  y = +1 positives,
// y = -1 sampled negatives, plus L2 on the three touched embedding rows.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kg.hpp"
#include "rng.hpp"

namespace kgsc {

struct TrainConfig {
    std::size_t steps = 1000;          // mini-batches
    double learning_rate = 0.0004;
    std::size_t dimension = 100;
    std::size_t negatives_per_positive = 4;
    std::size_t batch_size = 32;
    double regularization_weight = 1e-3;
    std::uint64_t seed = 0;
};

class ComplExModel {
public:
    ComplExModel() = default;

    ComplExModel(std::size_t n_entities, std::size_t n_relations, std::size_t dimension)
        : dim_(dimension),
          ent_re_(n_entities, std::vector<double>(dimension, 0.0)),
          ent_im_(n_entities, std::vector<double>(dimension, 0.0)),
          rel_re_(n_relations, std::vector<double>(dimension, 0.0)),
          rel_im_(n_relations, std::vector<double>(dimension, 0.0)) {
        if (dimension == 0) throw std::invalid_argument("complex model: dimension must be >= 1");
    }

    // Elementwise Gaussian(0, 1/sqrt(d)); rows filled entity-major then
    // relation-major, real parts before imaginary, so a seed pins the model.
    static ComplExModel random_init(std::size_t n_entities, std::size_t n_relations, std::size_t dimension, Rng& rng) {
        ComplExModel m(n_entities, n_relations, dimension);
        const double scale = 1.0 / std::sqrt(static_cast<double>(dimension));
        auto fill = [&](std::vector<std::vector<double>>& rows) {
            for (auto& row : rows)
                for (auto& v : row) v = scale * gaussian(rng);
        };
        fill(m.ent_re_);
        fill(m.ent_im_);
        fill(m.rel_re_);
        fill(m.rel_im_);
        return m;
    }

    std::size_t dimension() const { return dim_; }
    std::size_t n_entities() const { return ent_re_.size(); }
    std::size_t n_relations() const { return rel_re_.size(); }

    double score(const Triplet& t) const {
        check_range(t);
        const auto& hr = ent_re_[t.head];
        const auto& hi = ent_im_[t.head];
        const auto& rr = rel_re_[t.relation];
        const auto& ri = rel_im_[t.relation];
        const auto& tr = ent_re_[t.tail];
        const auto& ti = ent_im_[t.tail];
        double s = 0.0;
        for (std::size_t k = 0; k < dim_; ++k)
            s += hr[k] * rr[k] * tr[k] + hi[k] * rr[k] * ti[k] + hr[k] * ri[k] * ti[k] - hi[k] * ri[k] * tr[k];
        return s;
    }

    std::vector<double>& entity_re(EntityId e) { return ent_re_.at(e); }
    std::vector<double>& entity_im(EntityId e) { return ent_im_.at(e); }
    std::vector<double>& relation_re(RelationId r) { return rel_re_.at(r); }
    std::vector<double>& relation_im(RelationId r) { return rel_im_.at(r); }
    const std::vector<double>& entity_re(EntityId e) const { return ent_re_.at(e); }
    const std::vector<double>& entity_im(EntityId e) const { return ent_im_.at(e); }
    const std::vector<double>& relation_re(RelationId r) const { return rel_re_.at(r); }
    const std::vector<double>& relation_im(RelationId r) const { return rel_im_.at(r); }

    // Versioned checkpoint; doubles stored as little-endian IEEE-754 bit
    // patterns so a round-trip is exact.
    void save(std::ostream& out) const {
        out.write(magic(), 8);
        write_u64(out, n_entities());
        write_u64(out, n_relations());
        write_u64(out, dim_);
        for (const auto* block : {&ent_re_, &ent_im_, &rel_re_, &rel_im_})
            for (const auto& row : *block)
                for (double v : row) write_u64(out, std::bit_cast<std::uint64_t>(v));
        if (!out) throw std::runtime_error("model save: write failed");
    }

    void save_file(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("model save: cannot open " + path);
        save(out);
    }

    static ComplExModel load(std::istream& in) {
        char m[8];
        in.read(m, 8);
        if (!in || std::memcmp(m, magic(), 8) != 0) throw std::runtime_error("model load: bad magic/version");
        const auto ne = read_u64(in);
        const auto nr = read_u64(in);
        const auto d = read_u64(in);
        ComplExModel model(ne, nr, d);
        for (auto* block : {&model.ent_re_, &model.ent_im_, &model.rel_re_, &model.rel_im_})
            for (auto& row : *block)
                for (double& v : row) v = std::bit_cast<double>(read_u64(in));
        if (!in) throw std::runtime_error("model load: truncated file");
        return model;
    }

    static ComplExModel load_file(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("model load: cannot open " + path);
        return load(in);
    }

private:
    static const char* magic() { return "KGSCCPX1"; }

    static void write_u64(std::ostream& out, std::uint64_t v) {
        char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out.write(b, 8);
    }

    static std::uint64_t read_u64(std::istream& in) {
        unsigned char b[8];
        in.read(reinterpret_cast<char*>(b), 8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }

    void check_range(const Triplet& t) const {
        if (t.head >= n_entities() || t.tail >= n_entities() || t.relation >= n_relations())
            throw std::out_of_range("complex model: triplet id out of range");
    }

    std::size_t dim_ = 0;
    std::vector<std::vector<double>> ent_re_, ent_im_, rel_re_, rel_im_;
};

inline double softplus(double x) {
    return x > 30.0 ? x : std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
    if (x > 30.0) return 1.0;
    if (x < -30.0) return 0.0;
    return 1.0 / (1.0 + std::exp(-x));
}

// Per-example objective: logistic loss on the labelled score plus L2 on the
// three touched rows (head and tail both counted even if they coincide).
inline double example_loss(const ComplExModel& m, const Triplet& t, int label, double reg) {
    const double s = m.score(t);
    double l2 = 0.0;
    for (const auto* row : {&m.entity_re(t.head), &m.entity_im(t.head), &m.relation_re(t.relation),
                            &m.relation_im(t.relation), &m.entity_re(t.tail), &m.entity_im(t.tail)})
        for (double v : *row) l2 += v * v;
    return softplus(-label * s) + reg * l2;
}

struct ExampleGrads {
    double loss = 0.0;
    std::vector<double> head_re, head_im, rel_re, rel_im, tail_re, tail_im;
};

// Analytic gradients of example_loss with respect to the six touched rows,
// all evaluated at the current parameter values.
inline ExampleGrads example_gradients(const ComplExModel& m, const Triplet& t, int label, double reg) {
    const std::size_t d = m.dimension();
    const auto& hr = m.entity_re(t.head);
    const auto& hi = m.entity_im(t.head);
    const auto& rr = m.relation_re(t.relation);
    const auto& ri = m.relation_im(t.relation);
    const auto& tr = m.entity_re(t.tail);
    const auto& ti = m.entity_im(t.tail);

    const double s = m.score(t);
    const double dldf = -label * sigmoid(-label * s);  // d softplus(-y s) / d s

    ExampleGrads g;
    g.loss = example_loss(m, t, label, reg);
    g.head_re.resize(d);
    g.head_im.resize(d);
    g.rel_re.resize(d);
    g.rel_im.resize(d);
    g.tail_re.resize(d);
    g.tail_im.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
        g.head_re[k] = dldf * (rr[k] * tr[k] + ri[k] * ti[k]) + 2.0 * reg * hr[k];
        g.head_im[k] = dldf * (rr[k] * ti[k] - ri[k] * tr[k]) + 2.0 * reg * hi[k];
        g.rel_re[k] = dldf * (hr[k] * tr[k] + hi[k] * ti[k]) + 2.0 * reg * rr[k];
        g.rel_im[k] = dldf * (hr[k] * ti[k] - hi[k] * tr[k]) + 2.0 * reg * ri[k];
        g.tail_re[k] = dldf * (hr[k] * rr[k] - hi[k] * ri[k]) + 2.0 * reg * tr[k];
        g.tail_im[k] = dldf * (hi[k] * rr[k] + hr[k] * ri[k]) + 2.0 * reg * ti[k];
    }
    return g;
}

// Corrupts head or tail (never the relation) with a uniform random entity and
// rejects corruptions that are true triplets of the graph. Errors out only
// when the graph covers the whole corruption space.
inline Triplet negative_sample(const Triplet& t, const KnowledgeGraph& kg, Rng& rng) {
    const std::uint64_t n = kg.n_entities();
    if (n < 2) throw std::invalid_argument("negative_sample: need at least 2 entities");
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Triplet neg = t;
        const bool corrupt_head = bernoulli(rng, 0.5);
        const auto e = static_cast<EntityId>(uniform_below(rng, n));
        (corrupt_head ? neg.head : neg.tail) = e;
        if (!kg.contains(neg)) return neg;
    }
    // Persistent rejection: enumerate to distinguish "space exhausted" from bad luck.
    std::vector<Triplet> valid;
    for (EntityId e = 0; e < kg.n_entities(); ++e) {
        Triplet a = t, b = t;
        a.head = e;
        b.tail = e;
        if (!kg.contains(a)) valid.push_back(a);
        if (!kg.contains(b)) valid.push_back(b);
    }
    if (valid.empty()) throw std::runtime_error("negative_sample: no negative exists for this triplet");
    return valid[uniform_below(rng, valid.size())];
}

// Plain SGD per Table-style training: sample a mini-batch of positives, pair
// each with filtered negatives, update immediately per example. Throws with
// the step index if the loss stops being finite.
inline ComplExModel train(const KnowledgeGraph& kg, const TrainConfig& cfg, Rng& rng,
                          std::vector<double>* step_loss = nullptr) {
    if (kg.empty()) throw std::invalid_argument("train: empty knowledge graph");
    if (cfg.learning_rate <= 0.0) throw std::invalid_argument("train: learning rate must be positive");
    if (cfg.dimension < 1) throw std::invalid_argument("train: dimension must be >= 1");
    if (cfg.batch_size < 1) throw std::invalid_argument("train: batch size must be >= 1");

    ComplExModel model = ComplExModel::random_init(kg.n_entities(), kg.n_relations(), cfg.dimension, rng);

    auto apply = [&](const Triplet& t, int label) {
        const auto g = example_gradients(model, t, label, cfg.regularization_weight);
        auto axpy = [&](std::vector<double>& row, const std::vector<double>& grad) {
            for (std::size_t k = 0; k < grad.size(); ++k) row[k] -= cfg.learning_rate * grad[k];
        };
        axpy(model.entity_re(t.head), g.head_re);
        axpy(model.entity_im(t.head), g.head_im);
        axpy(model.relation_re(t.relation), g.rel_re);
        axpy(model.relation_im(t.relation), g.rel_im);
        axpy(model.entity_re(t.tail), g.tail_re);
        axpy(model.entity_im(t.tail), g.tail_im);
        return g.loss;
    };

    const auto& triplets = kg.triplets();
    for (std::size_t step = 0; step < cfg.steps; ++step) {
        double loss_sum = 0.0;
        std::size_t n_examples = 0;
        for (std::size_t b = 0; b < cfg.batch_size; ++b) {
            const auto& pos = triplets[uniform_below(rng, triplets.size())];
            loss_sum += apply(pos, +1);
            ++n_examples;
            for (std::size_t k = 0; k < cfg.negatives_per_positive; ++k) {
                loss_sum += apply(negative_sample(pos, kg, rng), -1);
                ++n_examples;
            }
        }
        const double mean_loss = loss_sum / static_cast<double>(n_examples);
        if (!std::isfinite(mean_loss))
            throw std::runtime_error("train: non-finite loss at step " + std::to_string(step));
        if (step_loss) step_loss->push_back(mean_loss);
    }
    return model;
}

// Filtered rank of the true filler for a query with one hidden slot.
// Candidates are every entity (or every relation); fillers that complete a
// different known-true triplet are removed; ties place the true filler last.
inline std::size_t rank(const ComplExModel& model, const KnowledgeGraph& filter_kg, const Triplet& truth,
                        Role missing) {
    const double true_score = model.score(truth);
    const std::size_t n_candidates =
        missing == Role::relation ? model.n_relations() : model.n_entities();
    std::size_t r = 1;
    for (std::size_t c = 0; c < n_candidates; ++c) {
        Triplet candidate = truth;
        switch (missing) {
            case Role::head: candidate.head = static_cast<EntityId>(c); break;
            case Role::relation: candidate.relation = static_cast<RelationId>(c); break;
            case Role::tail: candidate.tail = static_cast<EntityId>(c); break;
        }
        if (candidate == truth) continue;
        if (filter_kg.contains(candidate)) continue;  // filtered setting
        if (model.score(candidate) >= true_score) ++r;  // pessimistic ties
    }
    return r;
}

// Filtered Hits@k over head and tail queries of the evaluation triplets.
inline double hits_at_k(const ComplExModel& model, const KnowledgeGraph& filter_kg,
                        const std::vector<Triplet>& eval, std::size_t k) {
    if (eval.empty()) throw std::invalid_argument("hits_at_k: empty evaluation set");
    std::size_t hits = 0;
    for (const auto& t : eval) {
        if (rank(model, filter_kg, t, Role::head) <= k) ++hits;
        if (rank(model, filter_kg, t, Role::tail) <= k) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(2 * eval.size());
}

// Mean score gap between training positives and one sampled negative each.
inline double score_margin(const ComplExModel& model, const KnowledgeGraph& kg, Rng& rng) {
    double pos = 0.0, neg = 0.0;
    for (const auto& t : kg.triplets()) {
        pos += model.score(t);
        neg += model.score(negative_sample(t, kg, rng));
    }
    return (pos - neg) / static_cast<double>(kg.size());
}

}  // namespace kgsc
