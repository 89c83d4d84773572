#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "statewidget/widget.hpp"

namespace statewidget {

inline constexpr std::string_view kProtocolVersion = "1.0";

enum class MsgType { Ready, RenderSpec, StateUpdate, HistoryUpdate, ActionDispatch, RestoreRequest, Error };

// Which way a frame travels. Every msg_type is legal in exactly one flow.
enum class Flow { FrontendToKernel, KernelToFrontend };

std::string_view to_string(MsgType type);
MsgType parse_msg_type(std::string_view text); // ProtocolError
std::string_view to_string(Flow flow);
Flow flow_of(MsgType type);

struct Envelope {
    std::string protocol_version{kProtocolVersion};
    std::string widget_id;
    std::uint64_t seq = 0;
    MsgType msg_type = MsgType::Ready;
    Value body = Value::object();

    bool operator==(const Envelope&) const = default;
};

Value to_json(const Envelope& envelope);

// One UTF-8 JSON document per frame with exactly the keys protocol_version,
// widget_id, seq, msg_type, body. Both throw ProtocolError when the
// msg_type does not belong to `flow` or the frame is malformed.
std::string encode(const Envelope& envelope, Flow flow);
Envelope decode(std::string_view frame, Flow flow);

// Error codes carried in error envelopes.
namespace error_code {
inline constexpr const char* kSeqOrder = "seq_order";
inline constexpr const char* kUnknownWidget = "unknown_widget";
inline constexpr const char* kBadBody = "bad_body";
inline constexpr const char* kBadFrame = "bad_frame";
inline constexpr const char* kBadDirection = "bad_direction";
} // namespace error_code

// Kernel end of the channel for one widget. Inbound messages are handled
// strictly in arrival order; replies carry their own increasing seq.
class CommChannel {
public:
    explicit CommChannel(Widget& widget) : widget_(widget) {}

    // Replies for one inbound envelope. Failures become a single error
    // envelope and leave the widget untouched.
    std::vector<Envelope> handle_inbound(const Envelope& inbound);

    // Same, starting from raw bytes. Undecodable frames yield bad_frame.
    std::vector<Envelope> handle_frame(std::string_view frame);

    std::optional<std::uint64_t> last_inbound_seq() const;

private:
    std::vector<Envelope> handle_locked(const Envelope& inbound);
    Envelope outbound(MsgType type, Value body);
    Envelope error(const std::string& code, const std::string& message, std::optional<std::uint64_t> in_reply_to);
    Envelope state_update();
    Envelope history_update();

    Widget& widget_;
    mutable std::mutex mutex_;
    std::optional<std::uint64_t> last_inbound_seq_;
    std::uint64_t next_outbound_seq_ = 0;
};

// Builds frontend-direction envelopes with consecutive seq numbers, the way
// a widget view would.
class HeadlessFrontend {
public:
    explicit HeadlessFrontend(std::string widget_id) : widget_id_(std::move(widget_id)) {}

    Envelope ready();
    Envelope dispatch(const ActionDispatch& dispatch);
    Envelope restore_request(StateId state_id);
    Envelope message(MsgType type, Value body);

private:
    std::string widget_id_;
    std::uint64_t next_seq_ = 0;
};

struct TranscriptEntry {
    Flow flow = Flow::FrontendToKernel;
    Envelope envelope;
};

using Transcript = std::vector<TranscriptEntry>;

// Feeds `script` through a fresh channel FIFO and records every envelope in
// both directions. Never stops early: per-message failures show up as error
// envelopes in the transcript.
Transcript headless_session(Widget& widget, const std::vector<Envelope>& script);

// [{"flow": "frontend_to_kernel", "frame": {...}}, ...]
Value to_json(const Transcript& transcript);

// Newline-delimited dispatch lines for every inbound action_dispatch or
// restore_request that the kernel accepted; readable by the replay tool.
std::string transcript_to_action_log(const Transcript& transcript);

} // namespace statewidget
