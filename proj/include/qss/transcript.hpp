#pragma once

// Replayable protocol record. Written as
//   # scheme <name> kind <cc|cq|qq> d <d> seed <seed>
//   round <i> | role <id> | basis <spec> | outcome <k> | kept <true|false>
//   ...
//   audit <name> <pass|fail> <value>
// Events keep insertion order, which the protocol code makes round order.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qss {

struct TranscriptEvent {
    std::size_t round = 0;
    std::string role;   // D, player id, or E<id> for the eavesdropper
    std::string basis;  // single-site observable, e.g. X^2Z, or a named procedure
    std::uint32_t outcome = 0;
    bool kept = false;
    friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

struct AuditRecord {
    std::string name;
    bool pass = false;
    std::string value;
    friend bool operator==(const AuditRecord&, const AuditRecord&) = default;
};

class ProtocolTranscript {
public:
    ProtocolTranscript() = default;
    ProtocolTranscript(std::string scheme, std::string kind, std::uint32_t d, std::uint64_t seed)
        : scheme_(std::move(scheme)), kind_(std::move(kind)), d_(d), seed_(seed) {}

    void add_event(TranscriptEvent e) { events_.push_back(std::move(e)); }
    void add_audit(std::string name, bool pass, std::string value) {
        audits_.push_back({std::move(name), pass, std::move(value)});
    }
    void append_events(const std::vector<TranscriptEvent>& events) {
        events_.insert(events_.end(), events.begin(), events.end());
    }

    const std::vector<TranscriptEvent>& events() const noexcept { return events_; }
    const std::vector<AuditRecord>& audits() const noexcept { return audits_; }
    bool all_audits_pass() const;

    std::string render() const;

    friend bool operator==(const ProtocolTranscript&, const ProtocolTranscript&) = default;

private:
    std::string scheme_;
    std::string kind_;
    std::uint32_t d_ = 3;
    std::uint64_t seed_ = 0;
    std::vector<TranscriptEvent> events_;
    std::vector<AuditRecord> audits_;
};

// Fixed-precision decimal used in audit values and summaries (6 places).
std::string format_real(double v, int places = 6);

} // namespace qss
