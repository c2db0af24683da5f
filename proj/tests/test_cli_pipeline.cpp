// End-to-end exercise of the installed CLI binary: encode -> patch -> mix
// -> two-stage -> sequence -> decode reproduces an edited block, plus
// smoke checks of stats/analyze and the error path.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <sys/stat.h>
#include <sys/wait.h>
#include <vector>

namespace {

int failures = 0;

#define CHECK_TRUE(cond, what)                                        \
    do {                                                              \
        if (!(cond)) {                                                \
            std::cerr << "FAIL " << what << " (" << #cond << ")\n";   \
            ++failures;                                               \
        }                                                             \
    } while (0)

std::string cli = DNASTORE_CLI_PATH;
const std::string dir = "cli_e2e_work";

int run(const std::string& args) {
    std::string cmd = cli + " " + args + " >" + dir + "/stdout.log 2>" + dir + "/stderr.log";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::size_t line_count(const std::string& path) {
    std::ifstream in(path);
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line)) ++n;
    return n;
}

std::string make_input(std::size_t bytes) {
    const std::string paragraph =
        "Either the well was very deep, or she fell very slowly, for she had plenty of time as "
        "she went down to look about her and to wonder what was going to happen next. ";
    std::string text;
    while (text.size() < bytes) text += paragraph;
    text.resize(bytes);
    return text;
}

} // namespace

int main() {
    std::remove((dir + "/stdout.log").c_str());
    mkdir(dir.c_str(), 0755);

    const std::string input = dir + "/alice.txt";
    const std::string manifest = dir + "/alice.manifest.json";
    const std::string pool = dir + "/alice.pool.tsv";
    std::string text = make_input(150272);
    {
        std::ofstream out(input, std::ios::binary);
        out << text;
    }

    // encode: 587 blocks -> 8805 strands.
    CHECK_TRUE(run("encode --input " + input + " --manifest " + manifest + " --pool " + pool +
                   " --tree-seed 42 --data-seed 1337") == 0,
               "encode succeeds");
    CHECK_TRUE(line_count(pool) == 8805 + 1, "pool holds 8805 strands plus header");

    // patch: three updates -> 45 strands.
    const std::string patches = dir + "/patches.json";
    {
        std::ofstream out(patches);
        out << "{\"patches\": ["
               "{\"block\": 144, \"del_start\": 0, \"del_len\": 3, \"ins_pos\": 0, \"ins_text\": \"THE\"},"
               "{\"block\": 307, \"del_start\": 10, \"del_len\": 3, \"ins_pos\": 10, \"ins_text\": \"***\"},"
               "{\"block\": 531, \"del_start\": 0, \"del_len\": 5, \"ins_pos\": 0, \"ins_text\": \"HOWDY\"}"
               "]}\n";
    }
    const std::string update_pool = dir + "/updates.pool.tsv";
    CHECK_TRUE(run("patch --manifest " + manifest + " --patches " + patches + " --pool " + update_pool) == 0,
               "patch succeeds");
    CHECK_TRUE(line_count(update_pool) == 45 + 1, "update pool holds 45 strands plus header");

    // mix (50000x concentration mismatch handled by measurement).
    const std::string mixed = dir + "/mixed.pool.tsv";
    CHECK_TRUE(run("mix --data " + pool + " --update " + update_pool + " --manifest " + manifest +
                   " --mode amplify-then-measure --epsilon 0.1 --seed 3 --out " + mixed) == 0,
               "mix succeeds");

    // two-stage precise access for block 531.
    const std::string amplified = dir + "/block531.pool.tsv";
    CHECK_TRUE(run("two-stage --pool " + mixed + " --manifest " + manifest + " --block 531 --out " +
                   amplified) == 0,
               "two-stage succeeds");

    // 225-read readout decodes both versions of the block.
    const std::string reads = dir + "/block531.reads.txt";
    CHECK_TRUE(run("sequence --pool " + amplified + " --reads 225 --seed 5 --out " + reads) == 0,
               "sequence succeeds");
    CHECK_TRUE(run("decode --reads " + reads + " --manifest " + manifest + " --block 531 " +
                   "--max-candidates 2 --out-dir " + dir) == 0,
               "decode succeeds");

    std::string original = slurp(dir + "/block_531.v0.bin");
    std::string updated = slurp(dir + "/block_531.updated.bin");
    std::string expected_original = text.substr(531 * 256, 256);
    std::string expected_updated = "HOWDY" + expected_original.substr(5);
    CHECK_TRUE(original == expected_original, "decoded original block matches the input");
    CHECK_TRUE(updated == expected_updated, "decoded updated block applies the patch");
    CHECK_TRUE(slurp(dir + "/block_531.report.json").find("\"versions\": 2") != std::string::npos,
               "report says two versions");

    // Whole-partition decode: the mixed pool carries data and updates, so
    // it matches the patched manifest. Coverage 4, noiseless.
    const std::string full_reads = dir + "/full.reads.txt";
    CHECK_TRUE(run("sequence --pool " + mixed + " --reads 35400 --p-sub 0 --p-ins 0 --p-del 0 --seed 9 "
                   "--out " + full_reads) == 0,
               "noiseless sequence succeeds");
    CHECK_TRUE(run("decode --reads " + full_reads + " --manifest " + manifest + " --all --out-dir " +
                   dir) == 0,
               "decode --all succeeds");
    CHECK_TRUE(slurp(dir + "/decoded.bin") == text, "whole-partition decode equals the input file");

    // stats + analyze smoke.
    CHECK_TRUE(run("stats --reads " + full_reads + " --manifest " + manifest + " --out " + dir +
                   "/hist.csv") == 0,
               "stats succeeds");
    CHECK_TRUE(slurp(dir + "/hist.csv").rfind("block,version,reads", 0) == 0, "histogram has the header");
    CHECK_TRUE(line_count(dir + "/hist.csv") == 587 + 3 + 1,
               "histogram covers 587 blocks plus 3 update slots");

    CHECK_TRUE(run("analyze --out " + dir + "/capacity.csv") == 0, "analyze succeeds");
    CHECK_TRUE(slurp(dir + "/capacity.csv").find("index_len,capacity_bytes") == 0, "capacity header");
    CHECK_TRUE(line_count(dir + "/capacity.csv") == 111 + 1, "capacity table rows");

    // Error path: decoding an empty reads file names the problem and fails.
    const std::string empty = dir + "/empty.reads.txt";
    { std::ofstream out(empty); }
    CHECK_TRUE(run("decode --reads " + empty + " --manifest " + manifest + " --block 531 --out-dir " +
                   dir) != 0,
               "decode of empty reads exits nonzero");
    CHECK_TRUE(slurp(dir + "/stderr.log").find("no reads") != std::string::npos,
               "error message mentions missing reads");

    if (failures == 0) std::cout << "cli pipeline: all checks passed\n";
    return failures == 0 ? 0 : 1;
}
