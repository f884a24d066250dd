// Term syntax for strategies and the store file; docs/strategy-grammar.md is the reference.

#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "flowmend/strategy.hpp"

namespace flowmend {
namespace {

void put(std::string& out, const IndexExpr& ix);
void put(std::string& out, const LocExpr& l);

void put(std::string& out, const Clause& c) {
    if (!c.neighbour) {
        out += "GetClause(";
        out += to_string(c.type);
        out += ')';
        return;
    }
    out += "GetNeighbourClause(GetEdge(";
    out += to_string(c.probe_kind);
    out += ", GetConstant(" + std::to_string(c.probe_index) + ")), ";
    out += to_string(c.type);
    out += ')';
}

void put(std::string& out, const TraversalFn& f) {
    if (f.kleene) {
        out += "GetKleeneStar(";
        out += to_string(f.kind);
        out += ", ";
        for (std::size_t i = 0; i < f.clauses.size(); ++i) {
            if (i) out += " & ";
            put(out, f.clauses[i]);
        }
        out += ')';
        return;
    }
    out += "GetEdge(";
    out += to_string(f.kind);
    out += ", ";
    put(out, f.index);
    out += ')';
}

void put(std::string& out, const LocExpr& l) {
    if (l.base.empty() && l.steps.empty()) {
        out += "Source";
        return;
    }
    out += "ApplyTraversal(";
    if (l.base.empty()) out += "Source";
    else put(out, l.base[0]);
    for (const TraversalFn& f : l.steps) {
        out += ", ";
        put(out, f);
    }
    out += ')';
}

void put(std::string& out, const IndexExpr& ix) {
    if (!ix.is_offset()) {
        out += "GetConstant(" + std::to_string(ix.z) + ")";
        return;
    }
    out += "GetOffsetIndex(";
    put(out, ix.anchor[0]);
    out += ", " + std::to_string(ix.z) + ")";
}

void put(std::string& out, const EAst& e) {
    if (e.reference) {
        out += "ReferenceAST(";
        put(out, e.loc[0]);
        out += ')';
        return;
    }
    out += "ConstantAST(";
    out += to_string(e.type);
    out += ", ";
    out += nlohmann::json(e.value).dump();
    for (const EAst& k : e.kids) {
        out += ", ";
        put(out, k);
    }
    out += ')';
}

class TermParser {
public:
    explicit TermParser(const std::string& s) : s_(s) {}

    Strategy strategy() {
        Strategy st;
        std::string head = word();
        if (head == "Insert") st.type = EditType::Insert;
        else if (head == "Replace") st.type = EditType::Replace;
        else fail("expected Insert or Replace");
        expect('(');
        st.loc = loc();
        expect(',');
        st.index = index();
        expect(',');
        st.out = east();
        expect(')');
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return st;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw StrategyParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    void expect(char c) {
        if (!peek(c)) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string word() {
        skip_ws();
        std::size_t b = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        if (b == pos_) fail("expected a name");
        return s_.substr(b, pos_ - b);
    }

    int integer() {
        skip_ws();
        std::size_t b = pos_;
        if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == b || (pos_ == b + 1 && s_[b] == '-')) fail("expected an integer");
        try {
            return std::stoi(s_.substr(b, pos_ - b));
        } catch (const std::exception&) {
            pos_ = b;
            fail("integer out of range");
        }
    }

    NodeType node_type() {
        std::size_t at = pos_;
        auto t = node_type_from(word());
        if (!t) {
            pos_ = at;
            fail("unknown node type");
        }
        return *t;
    }

    EdgeKind edge_kind() {
        std::size_t at = pos_;
        auto k = edge_kind_from(word());
        if (!k) {
            pos_ = at;
            fail("unknown edge kind");
        }
        return *k;
    }

    LocExpr loc() {
        std::string w = word();
        if (w == "Source") return LocExpr::source();
        if (w != "ApplyTraversal") fail("expected Source or ApplyTraversal");
        expect('(');
        LocExpr l;
        LocExpr base = loc();
        if (!(base.base.empty() && base.steps.empty())) l.base.push_back(std::move(base));
        while (peek(',')) {
            ++pos_;
            l.steps.push_back(fn());
        }
        expect(')');
        if (l.steps.empty()) fail("ApplyTraversal needs at least one step");
        return l;
    }

    TraversalFn fn() {
        std::string w = word();
        expect('(');
        EdgeKind k = edge_kind();
        expect(',');
        TraversalFn f;
        if (w == "GetEdge") {
            f = TraversalFn::edge(k, index());
        } else if (w == "GetKleeneStar") {
            ClauseConj c{clause()};
            while (peek('&')) {
                ++pos_;
                c.push_back(clause());
            }
            f = TraversalFn::star(k, std::move(c));
        } else {
            fail("expected GetEdge or GetKleeneStar");
        }
        expect(')');
        return f;
    }

    Clause clause() {
        std::string w = word();
        expect('(');
        Clause c;
        if (w == "GetClause") {
            c.type = node_type();
        } else if (w == "GetNeighbourClause") {
            if (word() != "GetEdge") fail("expected GetEdge");
            expect('(');
            c.neighbour = true;
            c.probe_kind = edge_kind();
            expect(',');
            IndexExpr ix = index();
            if (ix.is_offset()) fail("neighbour probes take a constant index");
            c.probe_index = ix.z;
            expect(')');
            expect(',');
            c.type = node_type();
        } else {
            fail("expected GetClause or GetNeighbourClause");
        }
        expect(')');
        return c;
    }

    IndexExpr index() {
        std::string w = word();
        expect('(');
        IndexExpr ix;
        if (w == "GetConstant") {
            ix = IndexExpr::constant(integer());
        } else if (w == "GetOffsetIndex") {
            LocExpr a = loc();
            expect(',');
            ix = IndexExpr::offset(std::move(a), integer());
        } else {
            fail("expected GetConstant or GetOffsetIndex");
        }
        expect(')');
        return ix;
    }

    std::string quoted() {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != '"') fail("expected a string");
        std::size_t b = pos_++;
        while (pos_ < s_.size() && s_[pos_] != '"') pos_ += s_[pos_] == '\\' ? 2 : 1;
        if (pos_ >= s_.size()) fail("unterminated string");
        ++pos_;
        try {
            return nlohmann::json::parse(s_.substr(b, pos_ - b)).get<std::string>();
        } catch (const nlohmann::json::exception&) {
            pos_ = b;
            fail("bad string escape");
        }
    }

    EAst east() {
        std::string w = word();
        expect('(');
        EAst e;
        if (w == "ReferenceAST") {
            e = EAst::ref(loc());
        } else if (w == "ConstantAST") {
            NodeType t = node_type();
            expect(',');
            std::string v = quoted();
            std::vector<EAst> kids;
            while (peek(',')) {
                ++pos_;
                kids.push_back(east());
            }
            if (!arity_ok(t, kids.size())) fail(std::string("bad arity for ") + std::string(to_string(t)));
            e = EAst::constant(t, std::move(v), std::move(kids));
        } else {
            fail("expected ConstantAST or ReferenceAST");
        }
        expect(')');
        return e;
    }
};

constexpr const char* kStoreMagic = "flowmend-strategies 1";

}  // namespace

std::string serialize(const Strategy& s) {
    std::string out = std::string(to_string(s.type)) + "(";
    put(out, s.loc);
    out += ", ";
    put(out, s.index);
    out += ", ";
    put(out, s.out);
    out += ')';
    return out;
}

std::string serialize(const LocExpr& l) {
    std::string out;
    put(out, l);
    return out;
}

std::string serialize(const EAst& e) {
    std::string out;
    put(out, e);
    return out;
}

Strategy deserialize(const std::string& text) { return TermParser(text).strategy(); }

std::string format_store(const std::vector<StoreRecord>& records) {
    std::string out = std::string(kStoreMagic) + "\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        out += "@strategy " + std::to_string(i) + " spec=" + records[i].spec +
               " cost=" + std::to_string(cost(records[i].strategy)) + "\n";
        out += serialize(records[i].strategy) + "\n";
    }
    return out;
}

std::vector<StoreRecord> parse_store(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kStoreMagic) throw StrategyParseError("not a strategy store", 0);
    std::vector<StoreRecord> out;
    std::size_t offset = line.size() + 1;
    while (std::getline(in, line)) {
        std::size_t here = offset;
        offset += line.size() + 1;
        if (line.empty()) continue;
        if (line.rfind("@strategy ", 0) != 0) throw StrategyParseError("expected a record header", here);
        auto sp = line.find(" spec=");
        auto cp = line.find(" cost=");
        if (sp == std::string::npos || cp == std::string::npos || cp < sp)
            throw StrategyParseError("malformed record header", here);
        StoreRecord r;
        r.spec = line.substr(sp + 6, cp - sp - 6);
        std::string term;
        if (!std::getline(in, term)) throw StrategyParseError("record without a term", offset);
        std::size_t term_at = offset;
        offset += term.size() + 1;
        try {
            r.strategy = deserialize(term);
        } catch (const StrategyParseError& e) {
            throw StrategyParseError(e.what(), term_at + e.pos);
        }
        out.push_back(std::move(r));
    }
    return out;
}

void write_store(const std::string& path, const std::vector<StoreRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path + ": cannot write");
    out << format_store(records);
}

std::vector<StoreRecord> read_store(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(path + ": cannot read");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_store(ss.str());
}

}  // namespace flowmend
