#include "qss/transcript.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace qss {

bool ProtocolTranscript::all_audits_pass() const {
    return std::all_of(audits_.begin(), audits_.end(), [](const AuditRecord& a) { return a.pass; });
}

std::string ProtocolTranscript::render() const {
    std::ostringstream out;
    out << "# scheme " << scheme_ << " kind " << kind_ << " d " << d_ << " seed " << seed_ << '\n';
    for (const auto& e : events_) {
        out << "round " << e.round << " | role " << e.role << " | basis " << e.basis << " | outcome " << e.outcome
            << " | kept " << (e.kept ? "true" : "false") << '\n';
    }
    for (const auto& a : audits_) out << "audit " << a.name << ' ' << (a.pass ? "pass" : "fail") << ' ' << a.value << '\n';
    return out.str();
}

std::string format_real(double v, int places) {
    // printf rounding is locale-free and identical run to run.
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", places, v);
    std::string s = buf;
    if (s == "-0." + std::string(static_cast<std::size_t>(places), '0')) s.erase(0, 1);
    return s;
}

} // namespace qss
