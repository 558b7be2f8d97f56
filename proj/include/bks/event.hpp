#pragma once

#include <optional>
#include <string>
#include <vector>

namespace bks {

using ObservableId = std::string;

struct Outcome {
    ObservableId id;
    int value = 0;

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// Partial outcome assignment, written P(A=1,B=0). Entry order is kept as
/// given; an observable may appear at most once.
class Event {
public:
    Event() = default;
    explicit Event(std::vector<Outcome> entries);

    const std::vector<Outcome>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    std::vector<ObservableId> ids() const;
    std::optional<int> value_of(const ObservableId& id) const;

    std::string str() const;

    friend bool operator==(const Event&, const Event&) = default;

private:
    std::vector<Outcome> entries_;
};

}  // namespace bks
