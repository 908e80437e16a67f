#pragma once
// Optional external verbalizer / sentence-embedder service client.
//
// Wire format (JSON over HTTP POST):
//   /verbalize  {"triplets": [["h","r","t"], ...]}  ->  {"texts": [...]}
//   /embed      {"texts": [...]}                    ->  {"embeddings": [[...], ...]}
//
// Failures (timeout, non-200, malformed body) never abort a pipeline: callers
// get std::nullopt plus a recorded warning and fall back to the built-in
// template verbalizer / bag-of-words embedder, degrading the metric only.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

namespace kgsc {

struct ServiceWarning {
    std::string endpoint;
    std::string message;
};

class ExternalServiceClient {
public:
    ExternalServiceClient(std::string host, int port, int timeout_ms = 2000)
        : host_(std::move(host)), port_(port), timeout_ms_(timeout_ms) {}

    std::optional<std::vector<std::string>> verbalize(
        const std::vector<std::array<std::string, 3>>& triplets) const {
        nlohmann::json body;
        body["triplets"] = nlohmann::json::array();
        for (const auto& t : triplets) body["triplets"].push_back({t[0], t[1], t[2]});

        const auto response = post("/verbalize", body);
        if (!response) return std::nullopt;
        if (!response->contains("texts") || !(*response)["texts"].is_array()) {
            warn("/verbalize", "response missing 'texts' array");
            return std::nullopt;
        }
        std::vector<std::string> texts;
        for (const auto& t : (*response)["texts"]) {
            if (!t.is_string()) {
                warn("/verbalize", "non-string entry in 'texts'");
                return std::nullopt;
            }
            texts.push_back(t.get<std::string>());
        }
        if (texts.size() != triplets.size()) {
            warn("/verbalize", "text count does not match triplet count");
            return std::nullopt;
        }
        return texts;
    }

    std::optional<std::vector<std::vector<double>>> embed(const std::vector<std::string>& texts) const {
        nlohmann::json body;
        body["texts"] = texts;

        const auto response = post("/embed", body);
        if (!response) return std::nullopt;
        if (!response->contains("embeddings") || !(*response)["embeddings"].is_array()) {
            warn("/embed", "response missing 'embeddings' array");
            return std::nullopt;
        }
        std::vector<std::vector<double>> vectors;
        for (const auto& row : (*response)["embeddings"]) {
            if (!row.is_array()) {
                warn("/embed", "non-array embedding row");
                return std::nullopt;
            }
            std::vector<double> v;
            for (const auto& x : row) {
                if (!x.is_number()) {
                    warn("/embed", "non-numeric embedding value");
                    return std::nullopt;
                }
                v.push_back(x.get<double>());
            }
            vectors.push_back(std::move(v));
        }
        if (vectors.size() != texts.size()) {
            warn("/embed", "embedding count does not match text count");
            return std::nullopt;
        }
        return vectors;
    }

    const std::vector<ServiceWarning>& warnings() const { return warnings_; }
    void clear_warnings() { warnings_.clear(); }

private:
    std::optional<nlohmann::json> post(const std::string& path, const nlohmann::json& body) const {
        httplib::Client client(host_, port_);
        client.set_connection_timeout(0, timeout_ms_ * 1000);
        client.set_read_timeout(0, timeout_ms_ * 1000);
        client.set_write_timeout(0, timeout_ms_ * 1000);

        const auto result = client.Post(path, body.dump(), "application/json");
        if (!result) {
            warn(path, "request failed: " + httplib::to_string(result.error()));
            return std::nullopt;
        }
        if (result->status != 200) {
            warn(path, "status " + std::to_string(result->status));
            return std::nullopt;
        }
        const auto parsed = nlohmann::json::parse(result->body, nullptr, false);
        if (parsed.is_discarded()) {
            warn(path, "response body is not valid JSON");
            return std::nullopt;
        }
        return parsed;
    }

    void warn(const std::string& endpoint, const std::string& message) const {
        warnings_.push_back({endpoint, message});
    }

    std::string host_;
    int port_;
    int timeout_ms_;
    mutable std::vector<ServiceWarning> warnings_;
};

}  // namespace kgsc
