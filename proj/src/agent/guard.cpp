#include "fire/agent.hpp"

namespace fire::agent {

std::string_view to_string(GuardAction a) {
    switch (a) {
    case GuardAction::None: return "None";
    case GuardAction::Proceed: return "Proceed";
    case GuardAction::InjectDiversity: return "InjectDiversity";
    case GuardAction::Terminate: return "Terminate";
    }
    return "None";
}

GuardAction guard_action_from_string(std::string_view s) {
    for (auto a : {GuardAction::None, GuardAction::Proceed, GuardAction::InjectDiversity, GuardAction::Terminate})
        if (to_string(a) == s) return a;
    throw Error("unknown guard action: " + std::string(s));
}

namespace {

struct Observation {
    int run_length = 1;
    std::optional<double> similarity;
};

// Empty strings never reach the embedder: two empties are identical, an
// empty and a non-empty item share nothing.
Observation observe(const std::optional<std::string>& last, std::optional<EmbeddingVector>& last_embedding,
                    int run_length, const std::string& item, Embedder& embedder, double threshold) {
    std::optional<EmbeddingVector> current;
    if (!item.empty()) current = embed(embedder, item);

    Observation obs;
    if (last) {
        double sim;
        if (item.empty() || last->empty())
            sim = (item.empty() && last->empty()) ? 1.0 : 0.0;
        else
            sim = cosine(*current, *last_embedding);
        obs.similarity = sim;
        obs.run_length = sim >= threshold ? run_length + 1 : 1;
    }
    last_embedding = std::move(current);
    return obs;
}

GuardAction decide(int run_length, const AgentConfig& config) {
    if (config.early_termination_window) {
        int w = *config.early_termination_window;
        int streak = config.window_counts_pairs ? run_length - 1 : run_length;
        if (streak >= w) return GuardAction::Terminate;
    }
    if (config.diversity_prompt && run_length >= 2) return GuardAction::InjectDiversity;
    return GuardAction::Proceed;
}

} // namespace

GuardDecision guard_observe_query(const GuardState& state, const std::string& query, Embedder& embedder,
                                  const AgentConfig& config) {
    GuardDecision d{state, GuardAction::Proceed, std::nullopt};
    auto obs = observe(d.state.last_query, d.state.last_query_embedding, d.state.query_run_length, query, embedder,
                       config.similarity_threshold);
    d.state.last_query = query;
    d.state.query_run_length = obs.run_length;
    d.similarity = obs.similarity;
    d.action = decide(obs.run_length, config);
    if (d.action == GuardAction::InjectDiversity) d.state.diversity_pending = true;
    return d;
}

GuardDecision guard_observe_snippet(const GuardState& state, const std::string& snippet, Embedder& embedder,
                                    const AgentConfig& config) {
    GuardDecision d{state, GuardAction::Proceed, std::nullopt};
    auto obs = observe(d.state.last_snippet, d.state.last_snippet_embedding, d.state.snippet_run_length, snippet,
                       embedder, config.similarity_threshold);
    d.state.last_snippet = snippet;
    d.state.snippet_run_length = obs.run_length;
    d.similarity = obs.similarity;
    d.action = decide(obs.run_length, config);
    if (d.action == GuardAction::InjectDiversity) d.state.diversity_pending = true;
    return d;
}

} // namespace fire::agent
