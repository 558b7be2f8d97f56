#include "bks/report.hpp"

#include <openssl/evp.h>

#include <array>

#include "bks/error.hpp"
#include "bks/format.hpp"

namespace bks {

using nlohmann::ordered_json;

namespace {

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json event_json(const Event& e) {
    ordered_json assignments = ordered_json::object();
    for (const auto& o : e.entries()) assignments[o.id] = o.value;
    return assignments;
}

ordered_json pairs_json(const std::vector<std::pair<ObservableId, ObservableId>>& pairs) {
    ordered_json out = ordered_json::array();
    for (const auto& [a, b] : pairs) out.push_back({a, b});
    return out;
}

std::string ids_text(const std::vector<ObservableId>& ids) {
    std::string s = "(";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) s += ",";
        s += ids[i];
    }
    return s + ")";
}

std::string opt_text(const std::optional<double>& v) { return v ? format_number(*v) : "none"; }

std::string pairs_text(const std::vector<std::pair<ObservableId, ObservableId>>& pairs) {
    std::string s;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (i) s += " ";
        s += "[" + pairs[i].first + "," + pairs[i].second + "]";
    }
    return s;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::InternalConsistency, "SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

ordered_json report_json(const AnalysisReport& r, const Provenance& p) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["scenario"] = r.scenario;
    j["dim"] = r.dim;
    j["tolerance"] = r.tolerance;
    j["witness_arity"] = r.witness_arity;
    j["state_independent"] = r.state_independent;
    j["all_commuting"] = r.all_commuting;
    j["premises_hold"] = r.premises_hold;

    auto& checks = j["constraint_checks"] = ordered_json::array();
    for (const auto& c : r.constraint_checks) {
        ordered_json cj;
        cj["constraint"] = c.text;
        cj["status"] = to_string(c.status);
        cj["value"] = optional_number(c.value);
        ordered_json probs = ordered_json::array();
        for (const auto& ep : c.event_probabilities) probs.push_back(optional_number(ep));
        cj["event_probabilities"] = std::move(probs);
        checks.push_back(std::move(cj));
    }

    j["classical"] = {{"total_assignments", r.classical_total},
                      {"support_size", r.classical_support_size},
                      {"unsatisfiable", r.classical_support_size == 0}};

    auto& queries = j["query_verdicts"] = ordered_json::array();
    for (const auto& q : r.query_verdicts) {
        ordered_json qj;
        qj["query"] = q.event.str();
        qj["event"] = event_json(q.event);
        qj["classical"] = q.classically_possible ? "possible" : "impossible";
        if (q.quantum_probability) {
            qj["quantum"] = {{"status", "PROBABILITY"}, {"probability", *q.quantum_probability}};
        } else {
            qj["quantum"] = {{"status", "INCOMPATIBLE"}, {"incompatible_pairs", pairs_json(q.incompatible_pairs)}};
        }
        queries.push_back(std::move(qj));
    }

    auto& products = j["product_verdicts"] = ordered_json::array();
    for (const auto& v : r.product_verdicts) {
        ordered_json pj;
        pj["ids"] = v.ids;
        pj["classical_implied"] = v.classical ? ordered_json(*v.classical) : ordered_json(nullptr);
        pj["quantum_status"] = to_string(v.quantum_status);
        pj["quantum_value"] = optional_number(v.quantum_value);
        products.push_back(std::move(pj));
    }

    auto& functionals = j["functional_verdicts"] = ordered_json::array();
    for (const auto& f : r.functional_verdicts) {
        ordered_json fj;
        fj["name"] = f.name;
        fj["classical_min"] = f.classical_min;
        fj["classical_max"] = f.classical_max;
        fj["quantum_value"] = optional_number(f.quantum_value);
        fj["exceeds_classical"] = f.exceeds_classical;
        functionals.push_back(std::move(fj));
    }

    auto& contradictions = j["contradictions"] = ordered_json::array();
    for (const auto& c : r.contradictions) {
        contradictions.push_back({{"kind", c.kind == Contradiction::Kind::Event ? "event" : "product"},
                                  {"query", c.query},
                                  {"classical", c.classical},
                                  {"quantum", c.quantum}});
    }

    auto& witnesses = j["witnesses"] = ordered_json::array();
    for (const auto& w : r.witnesses) {
        witnesses.push_back({{"event", w.event.str()},
                             {"arity", w.event.size()},
                             {"quantum", "INCOMPATIBLE"},
                             {"incompatible_pairs", pairs_json(w.incompatible_pairs)}});
    }

    j["commuting_model_deviation"] = optional_number(r.commuting_model_deviation);
    j["provenance"] = {{"tool", kToolName},
                       {"version", kToolVersion},
                       {"input", p.input},
                       {"input_sha256", p.input_sha256}};
    return j;
}

std::string report_text(const AnalysisReport& r, const Provenance& p) {
    std::string s;
    auto line = [&](const std::string& l) { s += l + "\n"; };
    line("scenario: " + r.scenario);
    line("schema_version: " + std::string(kSchemaVersion));
    line("dim: " + std::to_string(r.dim));
    line("tolerance: " + format_number(r.tolerance));
    line("witness_arity: " + std::to_string(r.witness_arity));
    line(std::string("state_independent: ") + (r.state_independent ? "true" : "false"));
    line(std::string("all_commuting: ") + (r.all_commuting ? "true" : "false"));
    line(std::string("premises_hold: ") + (r.premises_hold ? "true" : "false"));
    line("");
    line("constraint checks:");
    for (const auto& c : r.constraint_checks) {
        std::string probs;
        for (std::size_t i = 0; i < c.event_probabilities.size(); ++i) {
            probs += (i ? " " : "") + (c.event_probabilities[i] ? format_number(*c.event_probabilities[i])
                                                                : std::string("INCOMPATIBLE"));
        }
        line("  " + c.text + "  status=" + std::string(to_string(c.status)) + " value=" + opt_text(c.value) +
             (probs.empty() ? "" : " events=[" + probs + "]"));
    }
    line("");
    line("classical model: support " + std::to_string(r.classical_support_size) + " of " +
         std::to_string(r.classical_total) + " assignments" +
         (r.classical_support_size == 0 ? " (constraints classically unsatisfiable)" : ""));
    line("");
    line("queries:");
    for (const auto& q : r.query_verdicts) {
        line("  " + q.event.str() + "  classical=" + (q.classically_possible ? "possible" : "impossible") +
             "  quantum=" +
             (q.quantum_probability ? format_number(*q.quantum_probability)
                                    : "INCOMPATIBLE " + pairs_text(q.incompatible_pairs)));
    }
    for (const auto& v : r.product_verdicts) {
        line("  product" + ids_text(v.ids) + "  classical=" + (v.classical ? std::to_string(*v.classical) : "none") +
             "  quantum=" + std::string(to_string(v.quantum_status)) + " " + opt_text(v.quantum_value));
    }
    if (!r.functional_verdicts.empty()) {
        line("");
        line("functionals:");
        for (const auto& f : r.functional_verdicts) {
            line("  " + f.name + "  classical=[" + format_number(f.classical_min) + ", " +
                 format_number(f.classical_max) + "]  quantum=" + opt_text(f.quantum_value) +
                 "  exceeds_classical=" + (f.exceeds_classical ? "true" : "false"));
        }
    }
    line("");
    line("contradictions: " + std::to_string(r.contradictions.size()));
    for (const auto& c : r.contradictions) {
        line("  " + c.query + "  classical=" + format_number(c.classical) + "  quantum=" + format_number(c.quantum));
    }
    line("");
    line("witnesses (classically forbidden, quantum INCOMPATIBLE): " + std::to_string(r.witnesses.size()));
    for (const auto& w : r.witnesses) line("  " + w.event.str() + "  " + pairs_text(w.incompatible_pairs));
    if (r.commuting_model_deviation) {
        line("");
        line("commuting model deviation: " + format_number(*r.commuting_model_deviation));
    }
    if (r.state_independent) {
        line("");
        line("note: every verdict above follows from operator identities; the state plays no role");
    }
    line("");
    line("provenance: " + std::string(kToolName) + " " + kToolVersion + " input=" + p.input +
         " sha256=" + p.input_sha256);
    return s;
}

}  // namespace bks
