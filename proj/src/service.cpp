#include "newslead/service.hpp"

#include <httplib.h>
#include <json.hpp>

#include "newslead/version.hpp"

namespace newslead {

using nlohmann::json;

namespace {

void reply_error(httplib::Response& res, int status, const std::string& message) {
    res.status = status;
    res.set_content(json{{"error", message}}.dump(), "application/json");
}

}  // namespace

ScoringService::ScoringService(Stopwords stopwords, PrefixRules rules)
    : stopwords_(std::move(stopwords)), rules_(std::move(rules)) {}

void ScoringService::attach(httplib::Server& server) const {
    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(json{{"status", "ok"}, {"version", kVersion}}.dump(),
                        "application/json");
    });

    server.Post("/summarize", [this](const httplib::Request& req, httplib::Response& res) {
        json body = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
        if (!body.is_object() || !body.contains("text") || !body["text"].is_string()) {
            reply_error(res, 400, "body must be a JSON object with string 'text'");
            return;
        }
        LeadPolicy policy;
        if (body.contains("policy")) {
            if (!body["policy"].is_string()) {
                reply_error(res, 400, "'policy' must be a string like sentences:3 or chars:75");
                return;
            }
            try {
                policy = LeadPolicy::parse(body["policy"].get<std::string>());
            } catch (const std::invalid_argument& e) {
                reply_error(res, 400, e.what());
                return;
            }
        }
        const std::string text = body["text"].get<std::string>();
        SegmentedArticle article = segment_article("request", text, stopwords_, rules_);
        if (article.sentences.empty()) {
            reply_error(res, 422, "text is empty after cleaning");
            return;
        }
        json out{{"summary", lead_baseline(article, policy)}, {"policy", policy.to_string()}};
        res.set_content(out.dump(), "application/json");
    });

    server.Post("/score", [this](const httplib::Request& req, httplib::Response& res) {
        json body = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
        if (!body.is_object() || !body.contains("candidate") ||
            !body["candidate"].is_string() || !body.contains("references") ||
            !body["references"].is_array()) {
            reply_error(res, 400,
                        "body must have string 'candidate' and array 'references'");
            return;
        }
        std::vector<std::string> references;
        for (const auto& ref : body["references"]) {
            if (!ref.is_string()) {
                reply_error(res, 400, "'references' must contain strings");
                return;
            }
            references.push_back(ref.get<std::string>());
        }
        if (references.empty()) {
            reply_error(res, 422, "'references' must be non-empty");
            return;
        }
        ScoringPolicy policy;
        if (body.contains("policy")) {
            const auto& p = body["policy"];
            if (!p.is_object()) {
                reply_error(res, 400, "'policy' must be an object");
                return;
            }
            try {
                if (p.contains("variant")) {
                    policy.variant = ScoringPolicy::parse_variant(p["variant"].get<std::string>());
                }
                if (p.contains("report")) {
                    policy.report = ScoringPolicy::parse_report(p["report"].get<std::string>());
                }
                if (p.contains("truncate")) {
                    policy.truncation =
                        ScoringPolicy::parse_truncation(p["truncate"].get<std::string>());
                }
                if (p.contains("multi_ref")) {
                    policy.multi_ref =
                        ScoringPolicy::parse_multi_ref(p["multi_ref"].get<std::string>());
                }
            } catch (const json::exception&) {
                reply_error(res, 400, "policy fields must be strings");
                return;
            } catch (const std::invalid_argument& e) {
                reply_error(res, 400, e.what());
                return;
            }
        }
        const RougeScore score = score_multi_reference(body["candidate"].get<std::string>(),
                                                       references, policy, stopwords_);
        json out{{"precision", score.precision}, {"recall", score.recall}, {"f1", score.f1}};
        res.set_content(out.dump(), "application/json");
    });
}

bool ScoringService::run(const std::string& host, int port) const {
    httplib::Server server;
    attach(server);
    return server.listen(host, port);
}

}  // namespace newslead
