#include <json.hpp>

#include "ocgad/error.hpp"
#include "ocgad/ocel.hpp"

namespace ocgad {
namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kGlobalLog = "ocel:global-log";
constexpr const char* kEvents = "ocel:events";
constexpr const char* kObjects = "ocel:objects";
// Extension keys carrying what OCEL 1.0 cannot express, so that a written log
// reads back identically.
constexpr const char* kAttributeKinds = "ocgad:attribute-kinds";
constexpr const char* kActivities = "ocgad:activities";

void warn(std::vector<Diagnostic>* warnings, const std::string& where,
          const std::string& key) {
  if (warnings == nullptr) return;
  warnings->push_back(
      {DiagnosticKind::kUnknownKey, key, "unknown key ignored in " + where});
}

const Json& require(const Json& obj, const char* key, const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(Errc::kMissingField, ctx + " lacks '" + key + "'");
  }
  return *it;
}

std::vector<std::string> string_array(const Json& value,
                                      const std::string& ctx) {
  if (!value.is_array()) {
    throw Error(Errc::kMalformedDocument, ctx + " must be an array");
  }
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const Json& item : value) {
    if (!item.is_string()) {
      throw Error(Errc::kMalformedDocument, ctx + " must contain strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

AttributeValue to_attribute(const Json& value, const std::string& ctx) {
  if (value.is_number()) {
    const double x = value.get<double>();
    if (!std::isfinite(x)) {
      throw Error(Errc::kMalformedDocument, ctx + " is not finite");
    }
    return AttributeValue::numeric(x);
  }
  if (value.is_string()) {
    return AttributeValue::categorical(value.get<std::string>());
  }
  if (value.is_boolean()) {
    return AttributeValue::categorical(value.get<bool>() ? "true" : "false");
  }
  throw Error(Errc::kMalformedDocument,
              ctx + " must be a number, string or boolean");
}

AttributeKind kind_from_string(const std::string& text,
                               const std::string& ctx) {
  if (text == "numeric") return AttributeKind::kNumeric;
  if (text == "categorical") return AttributeKind::kCategorical;
  throw Error(Errc::kMalformedDocument, ctx + " has unknown kind " + text);
}

}  // namespace

ObjectCentricLog parse_ocel_json(std::string_view bytes,
                                 std::vector<Diagnostic>* warnings) {
  Json doc;
  try {
    doc = Json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kMalformedDocument, e.what());
  }
  if (!doc.is_object()) {
    throw Error(Errc::kMalformedDocument, "top level must be an object");
  }

  ObjectCentricLog log;
  std::vector<std::string> declared_attributes;
  std::map<std::string, AttributeKind> declared_kinds;

  for (const auto& [key, value] : doc.items()) {
    if (key != kGlobalLog && key != kEvents && key != kObjects) {
      warn(warnings, "document", key);
    }
  }

  if (auto it = doc.find(kGlobalLog); it != doc.end()) {
    if (!it->is_object()) {
      throw Error(Errc::kMalformedDocument, "ocel:global-log must be an object");
    }
    for (const auto& [key, value] : it->items()) {
      if (key == "ocel:object-types") {
        for (auto& t : string_array(value, key)) log.object_types.insert(t);
      } else if (key == "ocel:attribute-names") {
        declared_attributes = string_array(value, key);
      } else if (key == kAttributeKinds) {
        if (!value.is_object()) {
          throw Error(Errc::kMalformedDocument, key + " must be an object");
        }
        for (const auto& [name, kind] : value.items()) {
          if (!kind.is_string()) {
            throw Error(Errc::kMalformedDocument, key + " values are strings");
          }
          declared_kinds[name] = kind_from_string(kind.get<std::string>(), key);
        }
      } else if (key == kActivities) {
        for (auto& a : string_array(value, key)) log.activities.insert(a);
      } else if (key != "ocel:version" && key != "ocel:ordering") {
        warn(warnings, kGlobalLog, key);
      }
    }
  }

  const Json& objects = require(doc, kObjects, "document");
  if (!objects.is_object()) {
    throw Error(Errc::kMalformedDocument, "ocel:objects must be an object");
  }
  std::set<std::string> object_ids;
  log.objects.reserve(objects.size());
  for (const auto& [id, body] : objects.items()) {
    const std::string ctx = "object '" + id + "'";
    if (!body.is_object()) {
      throw Error(Errc::kMalformedDocument, ctx + " must be an object");
    }
    const Json& type = require(body, "ocel:type", ctx);
    if (!type.is_string()) {
      throw Error(Errc::kMalformedDocument, ctx + " type must be a string");
    }
    for (const auto& [key, unused] : body.items()) {
      if (key != "ocel:type" && key != "ocel:ovmap") warn(warnings, ctx, key);
    }
    log.objects.push_back({id, type.get<std::string>()});
    log.object_types.insert(log.objects.back().object_type);
    object_ids.insert(id);
  }

  const Json& events = require(doc, kEvents, "document");
  if (!events.is_object()) {
    throw Error(Errc::kMalformedDocument, "ocel:events must be an object");
  }
  std::map<std::string, AttributeKind> observed;
  log.events.reserve(events.size());
  for (const auto& [id, body] : events.items()) {
    const std::string ctx = "event '" + id + "'";
    if (!body.is_object()) {
      throw Error(Errc::kMalformedDocument, ctx + " must be an object");
    }
    Event ev;
    ev.id = id;

    const Json& activity = require(body, "ocel:activity", ctx);
    if (!activity.is_string()) {
      throw Error(Errc::kMalformedDocument, ctx + " activity must be a string");
    }
    ev.activity = activity.get<std::string>();

    const Json& ts = require(body, "ocel:timestamp", ctx);
    if (!ts.is_string()) {
      throw Error(Errc::kMalformedDocument, ctx + " timestamp must be a string");
    }
    ev.timestamp = Timestamp::parse_iso8601(ts.get<std::string>());

    for (auto& ref : string_array(require(body, "ocel:omap", ctx), ctx + " omap")) {
      if (!object_ids.contains(ref)) {
        throw Error(Errc::kDanglingObjectRef,
                    ctx + " references undeclared object '" + ref + "'");
      }
      ev.object_refs.insert(std::move(ref));
    }
    if (ev.object_refs.empty()) {
      throw Error(Errc::kEmptyObjectRefs, ctx + " references no object");
    }

    if (auto vm = body.find("ocel:vmap"); vm != body.end()) {
      if (!vm->is_object()) {
        throw Error(Errc::kMalformedDocument, ctx + " vmap must be an object");
      }
      for (const auto& [name, raw] : vm->items()) {
        if (raw.is_null()) continue;
        AttributeValue value = to_attribute(raw, ctx + " attribute " + name);
        auto [it, inserted] = observed.emplace(name, value.kind());
        if (!inserted && it->second != value.kind()) {
          throw Error(Errc::kInconsistentAttributeKind,
                      "attribute '" + name + "' is both numeric and categorical");
        }
        ev.attributes.emplace(name, std::move(value));
      }
    }
    for (const auto& [key, unused] : body.items()) {
      if (key != "ocel:activity" && key != "ocel:timestamp" &&
          key != "ocel:omap" && key != "ocel:vmap") {
        warn(warnings, ctx, key);
      }
    }
    log.activities.insert(ev.activity);
    log.events.push_back(std::move(ev));
  }

  for (const auto& [name, kind] : observed) {
    auto it = declared_kinds.find(name);
    if (it != declared_kinds.end() && it->second != kind) {
      throw Error(Errc::kInconsistentAttributeKind,
                  "attribute '" + name + "' observed as " + to_string(kind) +
                      " but declared " + to_string(it->second));
    }
    log.schema[name] = kind;
  }
  for (const auto& [name, kind] : declared_kinds) log.schema.emplace(name, kind);
  for (const auto& name : declared_attributes) {
    log.schema.emplace(name, AttributeKind::kNumeric);
  }

  if (auto problems = validate_log(log); !problems.empty()) {
    const Diagnostic& first = problems.front();
    const Errc code = first.kind == DiagnosticKind::kDuplicateEventId
                          ? Errc::kDuplicateEventId
                          : Errc::kMalformedDocument;
    throw Error(code, std::string(to_string(first.kind)) + " at '" +
                          first.subject_id + "': " + first.message);
  }
  return log;
}

std::string write_ocel_json(const ObjectCentricLog& log) {
  Json global = Json::object();
  global["ocel:version"] = "1.0";
  global["ocel:ordering"] = "timestamp";
  Json names = Json::array();
  Json kinds = Json::object();
  for (const auto& [name, kind] : log.schema) {
    names.push_back(name);
    kinds[name] = to_string(kind);
  }
  global["ocel:attribute-names"] = std::move(names);
  global["ocel:object-types"] = log.object_types;
  global[kAttributeKinds] = std::move(kinds);
  global[kActivities] = log.activities;

  Json events = Json::object();
  for (const Event& ev : log.events) {
    Json body = Json::object();
    body["ocel:activity"] = ev.activity;
    body["ocel:timestamp"] = ev.timestamp.to_iso8601();
    body["ocel:omap"] = ev.object_refs;
    Json vmap = Json::object();
    for (const auto& [name, value] : ev.attributes) {
      if (value.is_numeric()) {
        vmap[name] = value.as_number();
      } else {
        vmap[name] = value.as_text();
      }
    }
    body["ocel:vmap"] = std::move(vmap);
    events[ev.id] = std::move(body);
  }

  Json objects = Json::object();
  for (const ObjectEntry& obj : log.objects) {
    objects[obj.id] = {{"ocel:type", obj.object_type},
                       {"ocel:ovmap", Json::object()}};
  }

  Json doc = Json::object();
  doc[kGlobalLog] = std::move(global);
  doc[kEvents] = std::move(events);
  doc[kObjects] = std::move(objects);
  return doc.dump(1) + "\n";
}

}  // namespace ocgad
