#include "statewidget/protocol.hpp"

#include <array>
#include <set>

#include "statewidget/errors.hpp"

namespace statewidget {

namespace {

constexpr std::array<std::pair<MsgType, std::string_view>, 7> kMsgNames{{
    {MsgType::Ready, "ready"},
    {MsgType::RenderSpec, "render_spec"},
    {MsgType::StateUpdate, "state_update"},
    {MsgType::HistoryUpdate, "history_update"},
    {MsgType::ActionDispatch, "action_dispatch"},
    {MsgType::RestoreRequest, "restore_request"},
    {MsgType::Error, "error"},
}};

void check_flow(MsgType type, Flow flow) {
    if (flow_of(type) != flow) {
        throw ProtocolError("msg_type '" + std::string(to_string(type)) + "' is not allowed " +
                            std::string(to_string(flow)));
    }
}

} // namespace

std::string_view to_string(MsgType type) {
    for (const auto& [value, name] : kMsgNames) {
        if (value == type) return name;
    }
    throw ProtocolError("msg_type out of range");
}

MsgType parse_msg_type(std::string_view text) {
    for (const auto& [value, name] : kMsgNames) {
        if (name == text) return value;
    }
    throw ProtocolError("unknown msg_type '" + std::string(text) + "'");
}

std::string_view to_string(Flow flow) {
    return flow == Flow::FrontendToKernel ? "frontend_to_kernel" : "kernel_to_frontend";
}

Flow flow_of(MsgType type) {
    switch (type) {
        case MsgType::Ready:
        case MsgType::ActionDispatch:
        case MsgType::RestoreRequest:
            return Flow::FrontendToKernel;
        default:
            return Flow::KernelToFrontend;
    }
}

Value to_json(const Envelope& envelope) {
    return Value{{"protocol_version", envelope.protocol_version},
                 {"widget_id", envelope.widget_id},
                 {"seq", envelope.seq},
                 {"msg_type", std::string(to_string(envelope.msg_type))},
                 {"body", envelope.body}};
}

std::string encode(const Envelope& envelope, Flow flow) {
    check_flow(envelope.msg_type, flow);
    if (envelope.protocol_version != kProtocolVersion) {
        throw ProtocolError("unsupported protocol_version '" + envelope.protocol_version + "'");
    }
    try {
        return to_json(envelope).dump();
    } catch (const nlohmann::json::type_error& e) {
        throw ProtocolError(std::string("envelope is not encodable: ") + e.what());
    }
}

Envelope decode(std::string_view frame, Flow flow) {
    Value document;
    try {
        document = Value::parse(frame);
    } catch (const nlohmann::json::parse_error& e) {
        throw ProtocolError(std::string("frame is not JSON: ") + e.what());
    }
    static const std::set<std::string> kKeys{"protocol_version", "widget_id", "seq", "msg_type", "body"};
    if (!document.is_object() || document.size() != kKeys.size()) {
        throw ProtocolError("frame must be an object with exactly five keys");
    }
    for (const auto& [key, value] : document.items()) {
        if (!kKeys.contains(key)) {
            throw ProtocolError("unexpected key '" + key + "'");
        }
    }
    const Value& version = document["protocol_version"];
    const Value& widget_id = document["widget_id"];
    const Value& seq = document["seq"];
    const Value& msg_type = document["msg_type"];
    if (!version.is_string() || version.get<std::string>() != kProtocolVersion) {
        throw ProtocolError("unsupported protocol_version " + version.dump());
    }
    if (!widget_id.is_string()) {
        throw ProtocolError("widget_id must be a string");
    }
    if (!seq.is_number_unsigned()) {
        throw ProtocolError("seq must be a non-negative integer");
    }
    if (!msg_type.is_string()) {
        throw ProtocolError("msg_type must be a string");
    }
    Envelope envelope;
    envelope.protocol_version = version.get<std::string>();
    envelope.widget_id = widget_id.get<std::string>();
    envelope.seq = seq.get<std::uint64_t>();
    envelope.msg_type = parse_msg_type(msg_type.get<std::string>());
    envelope.body = document["body"];
    check_flow(envelope.msg_type, flow);
    return envelope;
}

std::vector<Envelope> CommChannel::handle_inbound(const Envelope& inbound) {
    std::lock_guard lock(mutex_);
    return handle_locked(inbound);
}

std::vector<Envelope> CommChannel::handle_frame(std::string_view frame) {
    std::lock_guard lock(mutex_);
    Envelope inbound;
    try {
        inbound = decode(frame, Flow::FrontendToKernel);
    } catch (const ProtocolError& e) {
        return {error(error_code::kBadFrame, e.what(), std::nullopt)};
    }
    return handle_locked(inbound);
}

std::optional<std::uint64_t> CommChannel::last_inbound_seq() const {
    std::lock_guard lock(mutex_);
    return last_inbound_seq_;
}

std::vector<Envelope> CommChannel::handle_locked(const Envelope& inbound) {
    if (inbound.widget_id != widget_.widget_id()) {
        return {error(error_code::kUnknownWidget, "no widget '" + inbound.widget_id + "' on this channel",
                      inbound.seq)};
    }
    if (last_inbound_seq_ && inbound.seq <= *last_inbound_seq_) {
        return {error(error_code::kSeqOrder,
                      "seq " + std::to_string(inbound.seq) + " after " + std::to_string(*last_inbound_seq_),
                      inbound.seq)};
    }
    last_inbound_seq_ = inbound.seq;

    if (flow_of(inbound.msg_type) != Flow::FrontendToKernel) {
        return {error(error_code::kBadDirection,
                      "msg_type '" + std::string(to_string(inbound.msg_type)) + "' only flows kernel_to_frontend",
                      inbound.seq)};
    }

    switch (inbound.msg_type) {
        case MsgType::Ready:
            return {outbound(MsgType::RenderSpec, widget_.render_spec()), state_update()};

        case MsgType::ActionDispatch: {
            ActionDispatch dispatch;
            try {
                dispatch = dispatch_from_json(inbound.body);
            } catch (const Error& e) {
                return {error(error_code::kBadBody, e.what(), inbound.seq)};
            }
            try {
                widget_.handle_action(dispatch);
            } catch (const Error& e) {
                return {error(e.code(), e.what(), inbound.seq)};
            }
            return {state_update(), history_update()};
        }

        case MsgType::RestoreRequest: {
            const Value& body = inbound.body;
            auto state_id = body.is_object() ? body.find("state_id") : body.end();
            if (!body.is_object() || state_id == body.end() || !is_non_negative_integer(*state_id)) {
                return {error(error_code::kBadBody, "restore_request needs a non-negative integer state_id",
                              inbound.seq)};
            }
            try {
                widget_.restore(StateId{state_id->get<std::uint64_t>()});
            } catch (const Error& e) {
                return {error(e.code(), e.what(), inbound.seq)};
            }
            return {state_update(), history_update()};
        }

        default:
            break;
    }
    return {error(error_code::kBadDirection, "unexpected msg_type", inbound.seq)};
}

Envelope CommChannel::outbound(MsgType type, Value body) {
    Envelope envelope;
    envelope.widget_id = widget_.widget_id();
    envelope.seq = next_outbound_seq_++;
    envelope.msg_type = type;
    envelope.body = std::move(body);
    return envelope;
}

Envelope CommChannel::error(const std::string& code,
                            const std::string& message,
                            std::optional<std::uint64_t> in_reply_to) {
    Value body{{"code", code}, {"message", message}};
    body["in_reply_to"] = in_reply_to ? Value(*in_reply_to) : Value(nullptr);
    return outbound(MsgType::Error, std::move(body));
}

Envelope CommChannel::state_update() {
    const DataState state = widget_.current_state();
    return outbound(MsgType::StateUpdate, Value{{"state_id", state.state_id.value}, {"payload", state.payload}});
}

Envelope CommChannel::history_update() {
    Value rows = Value::array();
    for (const auto& row : widget_.history_view_model()) {
        rows.push_back(to_json(row));
    }
    return outbound(MsgType::HistoryUpdate, Value{{"rows", std::move(rows)}});
}

Envelope HeadlessFrontend::ready() { return message(MsgType::Ready, Value::object()); }

Envelope HeadlessFrontend::dispatch(const ActionDispatch& dispatch) {
    return message(MsgType::ActionDispatch, to_json(dispatch));
}

Envelope HeadlessFrontend::restore_request(StateId state_id) {
    return message(MsgType::RestoreRequest, Value{{"state_id", state_id.value}});
}

Envelope HeadlessFrontend::message(MsgType type, Value body) {
    Envelope envelope;
    envelope.widget_id = widget_id_;
    envelope.seq = next_seq_++;
    envelope.msg_type = type;
    envelope.body = std::move(body);
    return envelope;
}

Transcript headless_session(Widget& widget, const std::vector<Envelope>& script) {
    CommChannel channel(widget);
    Transcript transcript;
    for (const auto& inbound : script) {
        transcript.push_back({Flow::FrontendToKernel, inbound});
        for (auto& reply : channel.handle_inbound(inbound)) {
            transcript.push_back({Flow::KernelToFrontend, std::move(reply)});
        }
    }
    return transcript;
}

Value to_json(const Transcript& transcript) {
    Value out = Value::array();
    for (const auto& entry : transcript) {
        out.push_back(Value{{"flow", std::string(to_string(entry.flow))}, {"frame", to_json(entry.envelope)}});
    }
    return out;
}

std::string transcript_to_action_log(const Transcript& transcript) {
    std::string log;
    for (std::size_t i = 0; i < transcript.size(); ++i) {
        const auto& entry = transcript[i];
        if (entry.flow != Flow::FrontendToKernel) {
            continue;
        }
        const MsgType type = entry.envelope.msg_type;
        if (type != MsgType::ActionDispatch && type != MsgType::RestoreRequest) {
            continue;
        }
        // Accepted messages are answered by a state_update, rejected ones by an error.
        const bool accepted = i + 1 < transcript.size() &&
                              transcript[i + 1].flow == Flow::KernelToFrontend &&
                              transcript[i + 1].envelope.msg_type == MsgType::StateUpdate;
        if (!accepted) {
            continue;
        }
        Value line;
        if (type == MsgType::ActionDispatch) {
            line = entry.envelope.body;
        } else {
            const auto state_id = entry.envelope.body.at("state_id").get<std::uint64_t>();
            line = Value{{"interaction_type", "restore"},
                         {"component_id", "history"},
                         {"element", Value{{"path", "history/" + std::to_string(state_id)}}},
                         {"params", Value{{"restored_from", state_id}}}};
        }
        log += line.dump();
        log += '\n';
    }
    return log;
}

} // namespace statewidget
