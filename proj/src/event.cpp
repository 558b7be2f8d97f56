#include "bks/event.hpp"

#include <set>

#include "bks/error.hpp"

namespace bks {

Event::Event(std::vector<Outcome> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw Error(ErrorCode::InvalidEvent, "event must assign at least one outcome");
    std::set<ObservableId> seen;
    for (const auto& e : entries_) {
        if (!seen.insert(e.id).second) {
            throw Error(ErrorCode::InvalidEvent, "observable '" + e.id + "' appears twice in one event");
        }
    }
}

std::vector<ObservableId> Event::ids() const {
    std::vector<ObservableId> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.id);
    return out;
}

std::optional<int> Event::value_of(const ObservableId& id) const {
    for (const auto& e : entries_) {
        if (e.id == id) return e.value;
    }
    return std::nullopt;
}

std::string Event::str() const {
    std::string s = "P(";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) s += ",";
        s += entries_[i].id + "=" + std::to_string(entries_[i].value);
    }
    return s + ")";
}

}  // namespace bks
