#include "expectq/hash.hpp"
#include "expectq/scoring.hpp"

#include <algorithm>
#include <thread>

namespace expectq {

QueryEngine::QueryEngine(ProviderConfig config, std::unique_ptr<Provider> provider, ResponseCache& cache)
    : config_(std::move(config)),
      provider_(std::move(provider)),
      cache_(cache),
      sleeper_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {
    if (config_.max_concurrency < 1) throw Error(Errc::ConfigError, "max_concurrency must be at least 1");
    if (config_.max_attempts < 1) throw Error(Errc::ConfigError, "max_attempts must be at least 1");
    if (!provider_) throw Error(Errc::ConfigError, "query engine needs a provider");
}

QueryOutcome QueryEngine::query(const Prompt& prompt) {
    QueryOutcome out;
    const auto text = prompt.text();
    out.prompt_sha256 = sha256_hex(text);
    const auto key = ResponseCache::make_key(config_.model_name, out.prompt_sha256);
    if (auto hit = cache_.find(key)) {
        out.response = std::move(*hit);
        out.cache_hit = true;
        return out;
    }

    for (std::size_t attempt = 0; attempt < config_.max_attempts; ++attempt) {
        if (attempt > 0 && !config_.backoff.empty()) {
            sleeper_(config_.backoff[std::min(attempt - 1, config_.backoff.size() - 1)]);
        }
        ++out.attempts;
        const auto now = ++in_flight_;
        auto peak = peak_in_flight_.load();
        while (now > peak && !peak_in_flight_.compare_exchange_weak(peak, now)) {
        }
        ++provider_calls_;
        try {
            auto response = provider_->complete(prompt);
            --in_flight_;
            cache_.insert({key, config_.model_name, out.prompt_sha256, response, {}});
            out.response = std::move(response);
            out.error.reset();
            out.error_message.clear();
            return out;
        } catch (const Error& e) {
            --in_flight_;
            out.error = e.code();
            out.error_message = e.what();
            if (e.code() != Errc::TransportError) return out;
        } catch (const std::exception& e) {
            --in_flight_;
            out.error = Errc::TransportError;
            out.error_message = e.what();
        }
    }
    return out;
}

std::vector<QueryOutcome> QueryEngine::query_all(std::span<const Prompt> prompts) {
    std::vector<QueryOutcome> results(prompts.size());
    if (prompts.empty()) return results;

    // Identical prompts are sent once; later copies read the first result.
    std::unordered_map<std::string, std::size_t> first_of;
    std::vector<std::size_t> unique;
    std::vector<std::size_t> source(prompts.size());
    for (std::size_t i = 0; i < prompts.size(); ++i) {
        auto [it, inserted] = first_of.emplace(prompts[i].text(), i);
        source[i] = it->second;
        if (inserted) unique.push_back(i);
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < unique.size(); k = next++) {
            const auto i = unique[k];
            results[i] = query(prompts[i]);
        }
    };
    const auto n_workers = std::min(config_.max_concurrency, unique.size());
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }

    for (std::size_t i = 0; i < prompts.size(); ++i) {
        if (source[i] != i) {
            results[i] = results[source[i]];
            results[i].cache_hit = true;
            results[i].attempts = 0;
        }
    }
    return results;
}

}  // namespace expectq
