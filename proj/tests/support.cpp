#include "support.h"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

namespace testing_support {

namespace fs = std::filesystem;

fs::path source_dir() { return AUTOINDEX_SOURCE_DIR; }

std::vector<fs::path> corpus_programs() {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(source_dir() / "tests" / "corpus")) {
        if (entry.path().extension() == ".dl") out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("autoindex_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_random_facts(const autoindex::Program& program, const fs::path& dir, std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    const std::size_t domain = std::max<std::size_t>(4, n / 10);
    std::uniform_int_distribution<std::size_t> pick(0, domain - 1);
    for (const autoindex::IoDirective& in : program.inputs) {
        const std::size_t arity = program.find(in.relation)->schema.size();
        std::ofstream out(dir / in.path);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t a = 0; a < arity; ++a) out << (a ? "\t" : "") << "v" << pick(rng);
            out << "\n";
        }
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace testing_support
