#pragma once

#include <string>

#include "newslead/rouge.hpp"
#include "newslead/text.hpp"

namespace httplib {
class Server;
}

// JSON-over-HTTP facade: extractive lead-baseline summarization and ROUGE
// scoring as stateless endpoints.
//
//   POST /summarize  {"text": str, "policy": "sentences:K"|"chars:N"}
//                    -> {"summary": str, "policy": str}
//   POST /score      {"candidate": str, "references": [str, ...],
//                     "policy": {"variant", "report", "truncate", "multi_ref"}?}
//                    -> {"precision", "recall", "f1"}
//   GET  /healthz    -> {"status": "ok", "version": str}
//
// 400: malformed body or policy. 422: empty text / empty references.

namespace newslead {

class ScoringService {
public:
    ScoringService(Stopwords stopwords, PrefixRules rules);

    /// Register all routes on a server owned by the caller; handlers only
    /// read the immutable loaded resources, so concurrent requests are fine.
    void attach(httplib::Server& server) const;

    /// Bind and serve until the process is stopped. Returns false when the
    /// address cannot be bound.
    bool run(const std::string& host, int port) const;

private:
    Stopwords stopwords_;
    PrefixRules rules_;
};

}  // namespace newslead
