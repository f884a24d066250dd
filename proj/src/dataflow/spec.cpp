#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "flowmend/dataflow.hpp"

namespace flowmend {
namespace {

std::string scalar(const YAML::Node& n, const std::string& path) {
    if (!n || !n.IsScalar() || n.Scalar().empty()) throw SpecError(path + ": expected a non-empty name");
    return n.Scalar();
}

int index_of(const YAML::Node& n, const std::string& path) {
    if (!n || !n.IsScalar()) throw SpecError(path + ": expected an integer");
    int v = 0;
    try {
        v = n.as<int>();
    } catch (const YAML::Exception&) {
        throw SpecError(path + ": expected an integer");
    }
    if (v < 0) throw SpecError(path + ": index must be >= 0");
    return v;
}

/// A pattern entry is either a bare scalar (`- DynamicCall`) or a one-key map.
std::pair<std::string, YAML::Node> entry(const YAML::Node& n, const std::string& path) {
    if (n.IsScalar()) return {n.Scalar(), YAML::Node()};
    if (n.IsMap() && n.size() == 1) {
        auto it = n.begin();
        return {it->first.as<std::string>(), it->second};
    }
    throw SpecError(path + ": expected a pattern name or a single-key map");
}

SourcePattern source_of(const YAML::Node& n, const std::string& path) {
    auto [kind, arg] = entry(n, path);
    SourcePattern p;
    if (kind == "HandlerParam") {
        if (!arg.IsMap()) throw SpecError(path + ".HandlerParam: expected {registrar, index}");
        p.kind = SourcePattern::Kind::HandlerParam;
        p.name = scalar(arg["registrar"], path + ".HandlerParam.registrar");
        p.index = index_of(arg["index"], path + ".HandlerParam.index");
    } else if (kind == "NamedParam") {
        p.kind = SourcePattern::Kind::NamedParam;
        p.name = scalar(arg, path + ".NamedParam");
    } else if (kind == "CallResult") {
        p.kind = SourcePattern::Kind::CallResult;
        p.name = scalar(arg, path + ".CallResult");
    } else {
        throw SpecError(path + ": unknown source kind '" + kind + "'");
    }
    return p;
}

SinkPattern sink_of(const YAML::Node& n, const std::string& path) {
    auto [kind, arg] = entry(n, path);
    SinkPattern p;
    if (kind == "DynamicCall") {
        if (arg && !arg.IsNull()) throw SpecError(path + ".DynamicCall: takes no arguments");
        p.kind = SinkPattern::Kind::DynamicCall;
    } else if (kind == "CallArg") {
        if (!arg.IsMap()) throw SpecError(path + ".CallArg: expected {callee, index}");
        p.kind = SinkPattern::Kind::CallArg;
        p.callee = scalar(arg["callee"], path + ".CallArg.callee");
        p.index = index_of(arg["index"], path + ".CallArg.index");
    } else {
        throw SpecError(path + ": unknown sink kind '" + kind + "'");
    }
    return p;
}

GuardPattern guard_of(const YAML::Node& n, const std::string& path) {
    auto [kind, arg] = entry(n, path);
    GuardPattern p;
    if (kind == "MethodCall") {
        p.kind = GuardPattern::Kind::MethodCall;
        p.name = scalar(arg, path + ".MethodCall");
    } else if (kind == "TypeofCheck") {
        p.kind = GuardPattern::Kind::TypeofCheck;
        p.name = scalar(arg, path + ".TypeofCheck");
    } else if (kind == "InOperator") {
        if (arg && !arg.IsNull()) throw SpecError(path + ".InOperator: takes no arguments");
        p.kind = GuardPattern::Kind::InOperator;
    } else {
        throw SpecError(path + ": unknown guard kind '" + kind + "'");
    }
    return p;
}

YAML::Node seq(const YAML::Node& doc, const char* key, const std::string& path, bool required) {
    YAML::Node n = doc[key];
    if (!n || n.IsNull()) {
        if (required) throw SpecError(path + "." + key + ": missing");
        return YAML::Node(YAML::NodeType::Sequence);
    }
    if (!n.IsSequence()) throw SpecError(path + "." + key + ": expected a list");
    return n;
}

VulnSpec spec_of(const YAML::Node& doc, const std::string& path) {
    if (!doc.IsMap()) throw SpecError(path + ": expected a mapping");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        std::string k = it->first.as<std::string>();
        if (k != "name" && k != "sources" && k != "sinks" && k != "sanitizers" && k != "guards")
            throw SpecError(path + "." + k + ": unknown field");
    }
    VulnSpec s;
    s.name = scalar(doc["name"], path + ".name");
    YAML::Node src = seq(doc, "sources", path, true);
    for (std::size_t i = 0; i < src.size(); ++i)
        s.sources.push_back(source_of(src[i], path + ".sources[" + std::to_string(i) + "]"));
    YAML::Node snk = seq(doc, "sinks", path, true);
    for (std::size_t i = 0; i < snk.size(); ++i)
        s.sinks.push_back(sink_of(snk[i], path + ".sinks[" + std::to_string(i) + "]"));
    YAML::Node san = seq(doc, "sanitizers", path, false);
    for (std::size_t i = 0; i < san.size(); ++i)
        s.sanitizers.push_back(scalar(san[i], path + ".sanitizers[" + std::to_string(i) + "]"));
    YAML::Node grd = seq(doc, "guards", path, false);
    for (std::size_t i = 0; i < grd.size(); ++i)
        s.guards.push_back(guard_of(grd[i], path + ".guards[" + std::to_string(i) + "]"));
    if (s.sources.empty()) throw SpecError(path + ".sources: at least one source is required");
    if (s.sinks.empty()) throw SpecError(path + ".sinks: at least one sink is required");
    return s;
}

}  // namespace

std::vector<VulnSpec> parse_spec(const std::string& text) {
    std::vector<YAML::Node> docs;
    try {
        docs = YAML::LoadAll(text);
    } catch (const YAML::Exception& e) {
        throw SpecError(std::string("spec: ") + e.what());
    }
    std::vector<VulnSpec> out;
    std::set<std::string> names;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (docs[i].IsNull()) continue;
        VulnSpec s = spec_of(docs[i], "spec[" + std::to_string(i) + "]");
        if (!names.insert(s.name).second) throw SpecError("spec[" + std::to_string(i) + "].name: duplicate '" + s.name + "'");
        out.push_back(std::move(s));
    }
    if (out.empty()) throw SpecError("spec: no spec documents");
    return out;
}

std::vector<VulnSpec> load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError(path + ": cannot read");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_spec(ss.str());
    } catch (const SpecError& e) {
        throw SpecError(path + ": " + e.what());
    }
}

std::string format_spec(const VulnSpec& s) {
    YAML::Emitter out;
    out << YAML::BeginMap << YAML::Key << "name" << YAML::Value << s.name;
    out << YAML::Key << "sources" << YAML::Value << YAML::BeginSeq;
    for (const SourcePattern& p : s.sources) {
        out << YAML::BeginMap;
        switch (p.kind) {
            case SourcePattern::Kind::HandlerParam:
                out << YAML::Key << "HandlerParam" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key
                    << "registrar" << YAML::Value << p.name << YAML::Key << "index" << YAML::Value << p.index
                    << YAML::EndMap;
                break;
            case SourcePattern::Kind::NamedParam: out << YAML::Key << "NamedParam" << YAML::Value << p.name; break;
            case SourcePattern::Kind::CallResult: out << YAML::Key << "CallResult" << YAML::Value << p.name; break;
        }
        out << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::Key << "sinks" << YAML::Value << YAML::BeginSeq;
    for (const SinkPattern& p : s.sinks) {
        if (p.kind == SinkPattern::Kind::DynamicCall) {
            out << "DynamicCall";
            continue;
        }
        out << YAML::BeginMap << YAML::Key << "CallArg" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key
            << "callee" << YAML::Value << p.callee << YAML::Key << "index" << YAML::Value << p.index << YAML::EndMap
            << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::Key << "sanitizers" << YAML::Value << YAML::Flow << s.sanitizers;
    out << YAML::Key << "guards" << YAML::Value << YAML::BeginSeq;
    for (const GuardPattern& g : s.guards) {
        switch (g.kind) {
            case GuardPattern::Kind::InOperator: out << "InOperator"; break;
            case GuardPattern::Kind::MethodCall:
                out << YAML::BeginMap << YAML::Key << "MethodCall" << YAML::Value << g.name << YAML::EndMap;
                break;
            case GuardPattern::Kind::TypeofCheck:
                out << YAML::BeginMap << YAML::Key << "TypeofCheck" << YAML::Value << g.name << YAML::EndMap;
                break;
        }
    }
    out << YAML::EndSeq << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace flowmend
