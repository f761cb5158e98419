#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace rbm::cli {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Flat key=value settings. Every value read through a getter is recorded in
// `resolved`, which the manifest echoes.
class RunConfig {
public:
    void set(const std::string& key, const std::string& value) { values_[trim(key)] = trim(value); }

    void set_assignment(const std::string& kv)
    {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("expected key=value, got '" + kv + "'");
        set(kv.substr(0, eq), kv.substr(eq + 1));
    }

    // Lines are key = value; '#' starts a comment.
    void load_file(const std::string& path)
    {
        std::ifstream is(path);
        if (!is) throw std::runtime_error("cannot read config file " + path);
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.find('=') == std::string::npos)
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
            set_assignment(line);
        }
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& def)
    {
        const auto it = values_.find(key);
        const std::string v = it == values_.end() ? def : it->second;
        resolved_[key] = v;
        return v;
    }

    double get_double(const std::string& key, double def)
    {
        return parse<double>(key, def, [](const std::string& s, std::size_t* pos) { return std::stod(s, pos); });
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t def)
    {
        return parse<std::uint64_t>(key, def, [](const std::string& s, std::size_t* pos) {
            if (!s.empty() && s[0] == '-') throw std::invalid_argument("negative");
            const double d = std::stod(s, pos);
            if (d != static_cast<double>(static_cast<std::uint64_t>(d))) throw std::invalid_argument("not integral");
            return static_cast<std::uint64_t>(d);
        });
    }

    std::size_t get_size(const std::string& key, std::size_t def)
    {
        return static_cast<std::size_t>(get_u64(key, def));
    }

    std::vector<double> get_list(const std::string& key, const std::vector<double>& def)
    {
        const auto it = values_.find(key);
        std::vector<double> out;
        if (it == values_.end()) {
            out = def;
        } else {
            std::stringstream ss(it->second);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (item.empty()) continue;
                try {
                    out.push_back(std::stod(item));
                } catch (const std::exception&) {
                    throw std::invalid_argument("config key '" + key + "': bad list entry '" + item + "'");
                }
            }
        }
        std::string echo;
        for (std::size_t i = 0; i < out.size(); ++i) echo += (i ? "," : "") + to_text(out[i]);
        resolved_[key] = echo;
        return out;
    }

    const std::map<std::string, std::string>& resolved() const { return resolved_; }
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    static std::string to_text(double x)
    {
        std::ostringstream os;
        os.precision(17);
        os << x;
        return os.str();
    }

    template <typename T, typename Parser>
    T parse(const std::string& key, T def, Parser&& p)
    {
        const auto it = values_.find(key);
        if (it == values_.end()) {
            if constexpr (std::is_floating_point_v<T>)
                resolved_[key] = to_text(def);
            else
                resolved_[key] = std::to_string(def);
            return def;
        }
        try {
            std::size_t pos = 0;
            const T v = p(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
            resolved_[key] = it->second;
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("config key '" + key + "': cannot parse '" + it->second + "'");
        }
    }

    std::map<std::string, std::string> values_;
    std::map<std::string, std::string> resolved_;
};

} // namespace rbm::cli
