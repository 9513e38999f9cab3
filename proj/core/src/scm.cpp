#include "vaxmed/scm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "vaxmed/errors.hpp"
#include "vaxmed/rng.hpp"

namespace vaxmed {

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        carry_ += (sum_ - t) + x;
    } else {
        carry_ += (x - t) + sum_;
    }
    sum_ = t;
}

NodeSpec bernoulli_node(std::string name, std::vector<std::string> parents, std::vector<double> p_one,
                        Coupling coupling, int resolution) {
    if (p_one.empty()) throw InputError("node '" + name + "': no probabilities given");
    for (double p : p_one) {
        if (!(p >= 0.0 && p <= 1.0)) throw InputError("node '" + name + "': probability outside [0,1]");
    }
    NodeSpec spec;
    spec.name = std::move(name);
    spec.parents = std::move(parents);
    spec.support = {0, 1};
    const std::size_t configs = p_one.size();

    if (coupling == Coupling::Independent) {
        if (configs > 16) throw InputError("node '" + spec.name + "': independent coupling limited to 16 configurations");
        const std::size_t cells = std::size_t{1} << configs;
        spec.noise.assign(cells, 1.0);
        spec.table.assign(configs * cells, 0);
        for (std::size_t u = 0; u < cells; ++u) {
            for (std::size_t c = 0; c < configs; ++c) {
                const bool bit = (u >> c) & 1U;
                spec.noise[u] *= bit ? p_one[c] : 1.0 - p_one[c];
                spec.table[c * cells + u] = bit ? 1 : 0;
            }
        }
        return spec;
    }

    if (resolution < 0) throw InputError("node '" + spec.name + "': negative resolution");
    const double scale = resolution == 0 ? 1.0 : static_cast<double>(resolution);
    std::vector<double> thresholds(configs);
    for (std::size_t c = 0; c < configs; ++c) {
        thresholds[c] = resolution == 0 ? p_one[c] : std::round(p_one[c] * scale);
    }
    std::vector<double> cuts(thresholds);
    cuts.push_back(0.0);
    cuts.push_back(scale);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const std::size_t cells = cuts.size() - 1;
    spec.noise.resize(cells);
    spec.table.assign(configs * cells, 0);
    for (std::size_t u = 0; u < cells; ++u) {
        spec.noise[u] = (cuts[u + 1] - cuts[u]) / scale;
        for (std::size_t c = 0; c < configs; ++c) spec.table[c * cells + u] = cuts[u] < thresholds[c] ? 1 : 0;
    }
    return spec;
}

NodeSpec deterministic_node(std::string name, std::vector<std::string> parents, std::vector<int> support,
                            std::vector<int> value_by_config) {
    NodeSpec spec;
    spec.name = std::move(name);
    spec.parents = std::move(parents);
    spec.support = std::move(support);
    spec.noise = {1.0};
    spec.table = std::move(value_by_config);
    return spec;
}

StructuralModel::StructuralModel(std::vector<NodeSpec> nodes) : nodes_(std::move(nodes)) {
    std::vector<std::string> names;
    EdgeList edges;
    for (const auto& n : nodes_) names.push_back(n.name);
    for (const auto& n : nodes_) {
        for (const auto& p : n.parents) edges.push_back({p, n.name});
    }
    dag_ = CausalDag(names, edges);
    if (auto check = validate(dag_); !check.valid) {
        std::string cyc;
        for (const auto& v : check.cycle) cyc += (cyc.empty() ? "" : "->") + v;
        throw InputError("structural model has a cycle: " + cyc);
    }

    parent_index_.resize(nodes_.size());
    config_count_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (n.support.empty()) throw InputError("node '" + n.name + "': empty support");
        for (std::size_t a = 0; a < n.support.size(); ++a)
            for (std::size_t b = 0; b < a; ++b)
                if (n.support[a] == n.support[b]) throw InputError("node '" + n.name + "': repeated support value");
        if (n.noise.empty()) throw InputError("node '" + n.name + "': empty noise support");
        CompensatedSum total;
        for (double p : n.noise) {
            if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("node '" + n.name + "': negative noise probability");
            total.add(p);
        }
        if (std::abs(total.value() - 1.0) > 1e-12) {
            std::ostringstream os;
            os << "node '" << n.name << "': noise probabilities sum to " << total.value() << ", not 1";
            throw InputError(os.str());
        }
        std::size_t configs = 1;
        for (const auto& p : n.parents) {
            const auto pi = dag_.index_of(p);
            parent_index_[i].push_back(pi);
            configs *= nodes_[pi].support.size();
        }
        config_count_[i] = configs;
        if (n.table.size() != configs * n.noise.size()) {
            throw InputError("node '" + n.name + "': response table has " + std::to_string(n.table.size()) +
                             " entries, expected " + std::to_string(configs * n.noise.size()));
        }
        for (int v : n.table) {
            if (std::find(n.support.begin(), n.support.end(), v) == n.support.end())
                throw InputError("node '" + n.name + "': response value " + std::to_string(v) + " outside support");
        }
    }
}

bool StructuralModel::in_support(std::size_t node, int value) const {
    const auto& s = nodes_[node].support;
    return std::find(s.begin(), s.end(), value) != s.end();
}

std::size_t StructuralModel::config_of(std::size_t node, const Values& values) const {
    std::size_t config = 0;
    for (auto p : parent_index_[node]) {
        const auto& s = nodes_[p].support;
        const auto pos = static_cast<std::size_t>(std::find(s.begin(), s.end(), values[p]) - s.begin());
        config = config * s.size() + pos;
    }
    return config;
}

int StructuralModel::respond(std::size_t node, const Values& values, std::size_t noise) const {
    return nodes_[node].table[config_of(node, values) * nodes_[node].noise.size() + noise];
}

double StructuralModel::noise_space_size() const {
    double total = 1.0;
    for (const auto& n : nodes_) total *= static_cast<double>(n.noise.size());
    return total;
}

void StructuralModel::evaluate_into(const std::vector<std::size_t>& noise,
                                    const std::vector<std::optional<int>>& overrides, Values& out) const {
    out.resize(nodes_.size());
    for (auto v : dag_.topological_order()) {
        if (!overrides.empty() && overrides[v]) {
            out[v] = *overrides[v];
        } else {
            out[v] = respond(v, out, noise[v]);
        }
    }
}

Values StructuralModel::evaluate(const std::vector<std::size_t>& noise,
                                 const std::vector<std::optional<int>>& overrides) const {
    Values out;
    evaluate_into(noise, overrides, out);
    return out;
}

namespace {

std::vector<std::optional<int>> resolve_interventions(const StructuralModel& model, const Intervention& iv) {
    std::vector<std::optional<int>> overrides(model.size());
    for (const auto& [name, value] : iv) {
        const auto i = model.index_of(name);
        if (!model.in_support(i, value))
            throw InputError("intervention " + name + ":=" + std::to_string(value) + " is outside the node's support");
        overrides[i] = value;
    }
    return overrides;
}

void check_noise(const StructuralModel& model, const NoiseConfig& noise) {
    if (noise.index.size() != model.size()) throw InputError("noise configuration has wrong arity");
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (noise.index[i] >= model.nodes()[i].noise.size())
            throw InputError("noise value out of range for node '" + model.nodes()[i].name + "'");
    }
}

}  // namespace

std::map<std::string, int> evaluate(const StructuralModel& model, const NoiseConfig& noise,
                                    const Intervention& interventions) {
    check_noise(model, noise);
    const auto values = model.evaluate(noise.index, resolve_interventions(model, interventions));
    std::map<std::string, int> out;
    for (std::size_t i = 0; i < model.size(); ++i) out[model.nodes()[i].name] = values[i];
    return out;
}

bool CounterfactualQuery::operator==(const CounterfactualQuery&) const = default;

namespace {

class QueryParser {
public:
    explicit QueryParser(const std::string& text) : text_(text) {}

    CounterfactualQuery parse() {
        auto q = query();
        skip_space();
        if (pos_ != text_.size()) fail("trailing characters");
        return q;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw InputError("query '" + text_ + "': " + what + " at offset " + std::to_string(pos_));
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string name() {
        skip_space();
        const auto start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (start == pos_ || std::isdigit(static_cast<unsigned char>(text_[start]))) fail("expected node name");
        return text_.substr(start, pos_ - start);
    }

    CounterfactualQuery query() {
        CounterfactualQuery q;
        q.target = name();
        if (!accept('[')) return q;
        do {
            QueryAssignment a;
            a.node = name();
            if (!accept('=')) fail("expected '='");
            skip_space();
            if (pos_ < text_.size() && (text_[pos_] == '-' || std::isdigit(static_cast<unsigned char>(text_[pos_])))) {
                const auto start = pos_;
                ++pos_;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
                try {
                    a.value = std::stoi(text_.substr(start, pos_ - start));
                } catch (const std::exception&) {
                    fail("bad integer");
                }
            } else {
                a.value = query();
            }
            q.assignments.push_back(std::move(a));
        } while (accept(','));
        if (!accept(']')) fail("expected ']'");
        return q;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

}  // namespace

int query_depth(const CounterfactualQuery& query);

CounterfactualQuery parse_query(const std::string& text) {
    auto query = QueryParser(text).parse();
    if (query_depth(query) > kMaxQueryDepth)
        throw InputError("query " + text + " nests deeper than " + std::to_string(kMaxQueryDepth));
    return query;
}

std::string to_string(const CounterfactualQuery& query) {
    std::string out = query.target;
    if (query.assignments.empty()) return out;
    out += '[';
    for (std::size_t i = 0; i < query.assignments.size(); ++i) {
        const auto& a = query.assignments[i];
        if (i > 0) out += ',';
        out += a.node + "=";
        if (const int* c = std::get_if<int>(&a.value)) {
            out += std::to_string(*c);
        } else {
            out += to_string(std::get<CounterfactualQuery>(a.value));
        }
    }
    return out + ']';
}

int query_depth(const CounterfactualQuery& query) {
    if (query.assignments.empty()) return 0;
    int inner = 0;
    for (const auto& a : query.assignments) {
        if (const auto* sub = std::get_if<CounterfactualQuery>(&a.value)) inner = std::max(inner, query_depth(*sub));
    }
    return 1 + inner;
}

void check_query(const StructuralModel& model, const CounterfactualQuery& query) {
    if (query_depth(query) > kMaxQueryDepth)
        throw InputError("query " + to_string(query) + " nests deeper than " + std::to_string(kMaxQueryDepth));
    std::function<void(const CounterfactualQuery&)> check = [&](const CounterfactualQuery& q) {
        if (!model.dag().has_node(q.target)) throw InputError("query " + to_string(query) + ": unknown node '" + q.target + "'");
        std::vector<std::string> seen;
        for (const auto& a : q.assignments) {
            if (!model.dag().has_node(a.node))
                throw InputError("query " + to_string(query) + ": unknown node '" + a.node + "'");
            if (std::find(seen.begin(), seen.end(), a.node) != seen.end())
                throw InputError("query " + to_string(query) + ": node '" + a.node + "' assigned twice");
            seen.push_back(a.node);
            if (const int* c = std::get_if<int>(&a.value)) {
                if (!model.in_support(model.index_of(a.node), *c))
                    throw InputError("query " + to_string(query) + ": " + a.node + "=" + std::to_string(*c) +
                                     " is outside the node's support");
            } else {
                check(std::get<CounterfactualQuery>(a.value));
            }
        }
    };
    check(query);
}

namespace {

int resolve(const StructuralModel& model, const std::vector<std::size_t>& noise, const CounterfactualQuery& q,
            Values& scratch) {
    std::vector<std::optional<int>> overrides(model.size());
    for (const auto& a : q.assignments) {
        const auto i = model.index_of(a.node);
        if (const int* c = std::get_if<int>(&a.value)) {
            overrides[i] = *c;
        } else {
            overrides[i] = resolve(model, noise, std::get<CounterfactualQuery>(a.value), scratch);
        }
    }
    model.evaluate_into(noise, overrides, scratch);
    return scratch[model.index_of(q.target)];
}

// A query with its names resolved to indices, so enumeration loops do not
// search strings.
struct CompiledQuery {
    std::size_t target = 0;
    std::vector<std::pair<std::size_t, int>> constants;
    std::vector<std::pair<std::size_t, CompiledQuery>> subworlds;
};

CompiledQuery compile(const StructuralModel& model, const CounterfactualQuery& q) {
    CompiledQuery out;
    out.target = model.index_of(q.target);
    for (const auto& a : q.assignments) {
        const auto i = model.index_of(a.node);
        if (const int* c = std::get_if<int>(&a.value)) {
            out.constants.emplace_back(i, *c);
        } else {
            out.subworlds.emplace_back(i, compile(model, std::get<CounterfactualQuery>(a.value)));
        }
    }
    return out;
}

int run_compiled(const StructuralModel& model, const std::vector<std::size_t>& noise, const CompiledQuery& q,
                 std::vector<std::optional<int>>& overrides, Values& scratch) {
    std::vector<std::pair<std::size_t, int>> resolved;
    for (const auto& [node, sub] : q.subworlds) resolved.emplace_back(node, run_compiled(model, noise, sub, overrides, scratch));
    std::fill(overrides.begin(), overrides.end(), std::nullopt);
    for (const auto& [node, value] : q.constants) overrides[node] = value;
    for (const auto& [node, value] : resolved) overrides[node] = value;
    model.evaluate_into(noise, overrides, scratch);
    return scratch[q.target];
}

}  // namespace

int counterfactual(const StructuralModel& model, const NoiseConfig& noise, const CounterfactualQuery& query) {
    check_noise(model, noise);
    check_query(model, query);
    Values scratch;
    return resolve(model, noise.index, query, scratch);
}

void for_each_noise(const StructuralModel& model, const std::function<void(const NoiseConfig&)>& visit, double cap) {
    const std::size_t n = model.size();
    std::vector<std::vector<std::size_t>> live(n);
    double total = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& noise = model.nodes()[i].noise;
        for (std::size_t u = 0; u < noise.size(); ++u)
            if (noise[u] > 0.0) live[i].push_back(u);
        total *= static_cast<double>(live[i].size());
    }
    if (total > cap) {
        std::ostringstream os;
        os << "exact enumeration needs " << total << " noise configurations, above the cap of " << cap
           << "; use Monte Carlo estimation instead";
        throw CapacityError(os.str());
    }
    NoiseConfig config;
    config.index.assign(n, 0);
    std::vector<std::size_t> digit(n, 0);
    // prefix[i] = product of the probabilities of nodes 0..i-1.
    std::vector<double> prefix(n + 1, 1.0);
    auto refresh = [&](std::size_t from) {
        for (std::size_t i = from; i < n; ++i) {
            config.index[i] = live[i][digit[i]];
            prefix[i + 1] = prefix[i] * model.nodes()[i].noise[config.index[i]];
        }
    };
    refresh(0);
    while (true) {
        config.probability = prefix[n];
        visit(config);
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++digit[i] < live[i].size()) break;
            digit[i] = 0;
            if (i == 0) return;
        }
        if (n == 0) return;
        refresh(i);
    }
}

double analytic_expectation(const StructuralModel& model, const CounterfactualQuery& query, double cap,
                            const std::function<bool(const NoiseConfig&)>& filter) {
    check_query(model, query);
    const auto compiled = compile(model, query);
    std::vector<std::optional<int>> overrides(model.size());
    Values scratch;
    CompensatedSum sum;
    for_each_noise(
        model,
        [&](const NoiseConfig& config) {
            if (filter && !filter(config)) return;
            const int v = run_compiled(model, config.index, compiled, overrides, scratch);
            if (v != 0) sum.add(v * config.probability);
        },
        cap);
    return sum.value();
}

namespace {

constexpr std::size_t kSampleBlock = 1 << 16;

struct NoiseSampler {
    explicit NoiseSampler(const StructuralModel& model) {
        for (const auto& n : model.nodes()) {
            std::vector<double> cdf;
            double acc = 0.0;
            for (double p : n.noise) cdf.push_back(acc += p);
            cumulative.push_back(std::move(cdf));
        }
    }

    void draw(Rng& rng, std::vector<std::size_t>& out) const {
        out.resize(cumulative.size());
        for (std::size_t i = 0; i < cumulative.size(); ++i) out[i] = rng.categorical(cumulative[i]);
    }

    std::vector<std::vector<double>> cumulative;
};

}  // namespace

Dataset sample_units(const StructuralModel& model, std::size_t n, std::uint64_t seed, const SampleOptions& options) {
    if (n == 0) throw InputError("sample size must be at least 1");
    std::vector<CompiledQuery> extra;
    for (const auto& [name, q] : options.counterfactuals) {
        check_query(model, q);
        extra.push_back(compile(model, q));
    }

    const NoiseSampler sampler(model);
    std::vector<std::vector<int>> columns(model.size(), std::vector<int>(n));
    std::vector<std::vector<int>> cf_columns(extra.size(), std::vector<int>(n));
    std::vector<std::size_t> noise;
    std::vector<std::optional<int>> none;
    std::vector<std::optional<int>> overrides(model.size());
    Values values;
    Values scratch;

    // Units are drawn in fixed-size blocks with derived seeds, so a block's
    // draws do not depend on how many blocks precede it in a given run.
    for (std::size_t start = 0; start < n; start += kSampleBlock) {
        Rng rng(derive_seed(seed, start / kSampleBlock));
        const std::size_t stop = std::min(n, start + kSampleBlock);
        for (std::size_t u = start; u < stop; ++u) {
            sampler.draw(rng, noise);
            model.evaluate_into(noise, none, values);
            for (std::size_t i = 0; i < model.size(); ++i) columns[i][u] = values[i];
            for (std::size_t k = 0; k < extra.size(); ++k)
                cf_columns[k][u] = run_compiled(model, noise, extra[k], overrides, scratch);
        }
    }

    std::vector<std::string> names;
    for (const auto& node : model.nodes()) names.push_back(node.name);
    Dataset data(std::move(names), std::move(columns));
    for (std::size_t k = 0; k < extra.size(); ++k)
        data.add_column(options.counterfactuals[k].first, std::move(cf_columns[k]), false);
    return data;
}

MonteCarloEstimate monte_carlo_expectation(const StructuralModel& model, const CounterfactualQuery& query,
                                           std::size_t n, std::uint64_t seed) {
    if (n < 2) throw InputError("Monte Carlo needs at least two draws");
    check_query(model, query);
    const auto compiled = compile(model, query);
    const NoiseSampler sampler(model);
    std::vector<std::size_t> noise;
    std::vector<std::optional<int>> overrides(model.size());
    Values scratch;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t start = 0; start < n; start += kSampleBlock) {
        Rng rng(derive_seed(seed, start / kSampleBlock));
        const std::size_t stop = std::min(n, start + kSampleBlock);
        for (std::size_t u = start; u < stop; ++u) {
            sampler.draw(rng, noise);
            const double v = run_compiled(model, noise, compiled, overrides, scratch);
            sum += v;
            sum_sq += v * v;
        }
    }
    MonteCarloEstimate out;
    out.draws = n;
    out.mean = sum / static_cast<double>(n);
    const double var = (sum_sq - static_cast<double>(n) * out.mean * out.mean) / static_cast<double>(n - 1);
    out.se = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
    return out;
}

StructuralModel with_misclassified_copy(const StructuralModel& model, const std::string& node,
                                        const std::string& observed, double flip_prob) {
    if (!(flip_prob >= 0.0 && flip_prob <= 1.0)) throw InputError("flip probability must lie in [0,1]");
    const auto& src = model.node(node);
    if (src.support != std::vector<int>{0, 1}) throw InputError("node '" + node + "' is not binary {0,1}");
    if (model.dag().has_node(observed)) throw InputError("node '" + observed + "' already exists");
    auto nodes = model.nodes();
    NodeSpec copy;
    copy.name = observed;
    copy.parents = {node};
    copy.support = {0, 1};
    copy.noise = {1.0 - flip_prob, flip_prob};
    // config = parent value, noise 1 = flipped
    copy.table = {0, 1, 1, 0};
    nodes.push_back(std::move(copy));
    return StructuralModel(std::move(nodes));
}

}  // namespace vaxmed
