#include "statewidget/state_store.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <mutex>
#include <sstream>

#include "statewidget/errors.hpp"

namespace statewidget {

namespace {

void check_value(const Value& value, const std::string& where) {
    switch (value.type()) {
        case Value::value_t::discarded:
            throw PayloadError("discarded value at " + where);
        case Value::value_t::number_float:
            if (!std::isfinite(value.get<double>())) {
                throw PayloadError("non-finite number at " + where);
            }
            break;
        case Value::value_t::object:
            for (const auto& [key, child] : value.items()) {
                check_value(child, where + "/" + key);
            }
            break;
        case Value::value_t::array: {
            std::size_t index = 0;
            for (const auto& child : value) {
                check_value(child, where + "/" + std::to_string(index++));
            }
            break;
        }
        default:
            break;
    }
}

} // namespace

TimestampMs system_clock_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::string format_iso8601_utc(TimestampMs ms) {
    auto seconds = static_cast<std::time_t>(ms / 1000);
    auto millis = ms % 1000;
    if (millis < 0) {
        millis += 1000;
        --seconds;
    }
    std::tm tm{};
    gmtime_r(&seconds, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3) << std::setfill('0') << millis
        << 'Z';
    return out.str();
}

Value to_json(const ActionRecord& record) {
    return Value{
        {"action_id", record.action_id},
        {"timestamp", record.timestamp},
        {"interaction_type", std::string(to_string(record.interaction_type))},
        {"component_id", record.component_id},
        {"element", to_json(record.element)},
        {"params", record.params},
        {"result_state_id", record.result_state_id.value},
    };
}

ActionRecord action_record_from_json(const Value& value) {
    if (!value.is_object()) {
        throw ContractError("action record must be an object");
    }
    try {
        ActionRecord record;
        record.action_id = value.at("action_id").get<ActionId>();
        record.timestamp = value.at("timestamp").get<TimestampMs>();
        record.interaction_type = parse_interaction_type(value.at("interaction_type").get<std::string>());
        record.component_id = value.at("component_id").get<std::string>();
        record.element = element_from_json(value.at("element"));
        record.params = value.at("params");
        record.result_state_id = StateId{value.at("result_state_id").get<std::uint64_t>()};
        return record;
    } catch (const nlohmann::json::exception& e) {
        throw ContractError(std::string("malformed action record: ") + e.what());
    }
}

bool is_non_negative_integer(const Value& value) {
    return value.is_number_unsigned() || (value.is_number_integer() && value.get<std::int64_t>() >= 0);
}

void validate_payload(const Value& payload) {
    if (!payload.is_object()) {
        throw PayloadError("payload must be an object");
    }
    check_value(payload, "");
    try {
        (void)payload.dump();
    } catch (const nlohmann::json::type_error& e) {
        throw PayloadError(std::string("payload is not serializable: ") + e.what());
    }
}

StateStore::StateStore(std::string widget_id, std::string widget_type, Clock clock)
    : widget_id_(std::move(widget_id)), widget_type_(std::move(widget_type)), clock_(std::move(clock)) {}

std::pair<ActionRecord, DataState> StateStore::record_action(const ActionContext& context, Value payload) {
    (void)to_string(context.interaction_type);
    if (context.interaction_type == InteractionType::Restore) {
        throw ContractError("restore actions are recorded through restore()");
    }
    validate_payload(payload);
    auto shared = std::make_shared<const Value>(std::move(payload));

    std::unique_lock lock(mutex_);
    const bool first = records_.empty();
    if (first && context.interaction_type != InteractionType::Init) {
        throw ContractError("the first action of a widget must be init");
    }
    if (!first && context.interaction_type == InteractionType::Init) {
        throw ContractError("init may only be recorded once");
    }
    return append_locked(context, std::move(shared));
}

DataState StateStore::get_state(StateId state_id) const {
    std::shared_lock lock(mutex_);
    return snapshot(find_locked(state_id));
}

DataState StateStore::restore(StateId state_id) {
    std::unique_lock lock(mutex_);
    // Share the stored payload; it is immutable so no copy is needed.
    auto payload = find_locked(state_id).payload;
    ActionContext context;
    context.interaction_type = InteractionType::Restore;
    context.component_id = "history";
    context.element.path = "history/" + std::to_string(state_id.value);
    context.params = Value{{"restored_from", state_id.value}};
    return append_locked(context, std::move(payload)).second;
}

Value StateStore::export_state(std::optional<StateId> state_id) const {
    std::shared_lock lock(mutex_);
    if (states_.empty()) {
        throw NotFoundError("widget has no states yet");
    }
    const StoredState& stored = state_id ? find_locked(*state_id) : states_.back();
    return Value{
        {"widget_id", widget_id_},
        {"widget_type", widget_type_},
        {"state_id", stored.state_id.value},
        {"exported_at", format_iso8601_utc(clock_())},
        {"payload", *stored.payload},
    };
}

std::vector<ActionRecord> StateStore::history_list(std::optional<ActionRange> range) const {
    std::shared_lock lock(mutex_);
    if (!range) {
        return records_;
    }
    if (range->from_action_id > range->to_action_id) {
        throw ContractError("history range is inverted");
    }
    // Action ids are gap-free from 0, so they double as indices.
    std::vector<ActionRecord> out;
    for (ActionId id = range->from_action_id; id <= range->to_action_id && id < records_.size(); ++id) {
        out.push_back(records_[id]);
    }
    return out;
}

std::size_t StateStore::history_size() const {
    std::shared_lock lock(mutex_);
    return records_.size();
}

std::size_t StateStore::state_count() const {
    std::shared_lock lock(mutex_);
    return states_.size();
}

DataState StateStore::current_state() const {
    std::shared_lock lock(mutex_);
    if (states_.empty()) {
        throw NotFoundError("widget has no states yet");
    }
    return snapshot(states_.back());
}

StateId StateStore::current_state_id() const {
    std::shared_lock lock(mutex_);
    if (states_.empty()) {
        throw NotFoundError("widget has no states yet");
    }
    return states_.back().state_id;
}

void StateStore::attach_journal(const std::filesystem::path& path) {
    auto stream = std::make_unique<std::ofstream>(path, std::ios::out | std::ios::app);
    if (!*stream) {
        throw BackendError("cannot open action log " + path.string());
    }
    std::unique_lock lock(mutex_);
    for (const auto& record : records_) {
        *stream << to_json(record).dump() << '\n';
    }
    stream->flush();
    journal_ = std::move(stream);
}

std::pair<ActionRecord, DataState> StateStore::append_locked(const ActionContext& context,
                                                             std::shared_ptr<const Value> payload) {
    const TimestampMs now = clock_();
    ActionRecord record;
    record.action_id = records_.size();
    record.timestamp = now;
    record.interaction_type = context.interaction_type;
    record.component_id = context.component_id;
    record.element = context.element;
    record.params = context.params;
    record.result_state_id = StateId{states_.size()};

    StoredState stored{record.result_state_id, std::move(payload), now, record.action_id};

    if (journal_) {
        *journal_ << to_json(record).dump() << '\n';
        journal_->flush();
    }
    states_.push_back(stored);
    records_.push_back(record);
    return {record, snapshot(stored)};
}

const StateStore::StoredState& StateStore::find_locked(StateId state_id) const {
    if (state_id.value >= states_.size()) {
        throw NotFoundError("no state with id " + std::to_string(state_id.value));
    }
    return states_[state_id.value];
}

DataState StateStore::snapshot(const StoredState& stored) {
    return DataState{stored.state_id, *stored.payload, stored.created_at, stored.origin_action_id};
}

} // namespace statewidget
