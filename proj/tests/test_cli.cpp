#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// Exercises the embed binary end to end. The test runner passes its path via
// EMBED_BIN; without it the suite reports nothing to check.

namespace {

std::string embed_binary() {
  const char* env = std::getenv("EMBED_BIN");
  return env ? env : "";
}

int run_cmd(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

struct TempDir {
  std::string path;
  TempDir() : path("cli_test_work") {
    (void)run_cmd("rm -rf " + path + " && mkdir -p " + path);
  }
  ~TempDir() { (void)run_cmd("rm -rf " + path); }
};

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("embed binary: success, data-error, and usage-error exit codes") {
  const std::string bin = embed_binary();
  if (bin.empty()) {
    MESSAGE("EMBED_BIN not set; skipping CLI checks");
    return;
  }
  TempDir dir;
  {
    std::ofstream g(dir.path + "/g.txt");
    g << "0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n0 3\n";
  }

  const std::string out = dir.path + "/emb.tsv";
  CHECK(run_cmd(bin + " --input " + dir.path + "/g.txt --dim 2 --seed 1 --out " + out +
                " > /dev/null") == 0);

  // TSV contract: header plus one row per vertex, ids ascending
  std::ifstream tsv(out);
  std::string line;
  REQUIRE(std::getline(tsv, line));
  CHECK(line.rfind("#id\t", 0) == 0);
  int rows = 0;
  long long prev_id = -1;
  while (std::getline(tsv, line)) {
    std::istringstream ls(line);
    long long id;
    double x, y;
    REQUIRE(static_cast<bool>(ls >> id >> x >> y));
    CHECK(id > prev_id);
    prev_id = id;
    ++rows;
  }
  CHECK(rows == 6);

  CHECK(run_cmd(bin + " --input " + dir.path + "/does_not_exist.txt --out " + out +
                " 2> /dev/null") == 2);
  CHECK(run_cmd(bin + " --input " + dir.path + "/g.txt --svg " + dir.path +
                "/x.svg --dim 128 --out " + out + " 2> /dev/null") == 1);
  CHECK(run_cmd(bin + " --no-such-flag 2> /dev/null") == 1);

  // malformed edge list is a data error
  {
    std::ofstream bad(dir.path + "/bad.txt");
    bad << "0 1\nfoo bar\n";
  }
  CHECK(run_cmd(bin + " --input " + dir.path + "/bad.txt --out " + out + " 2> /dev/null") == 2);

  // a snapshot written on the way in reproduces the run byte for byte
  const std::string snap_out = dir.path + "/emb_snap.tsv";
  CHECK(run_cmd(bin + " --input " + dir.path + "/g.txt --seed 1 --out " + out +
                " --snapshot-out " + dir.path + "/g.gemp > /dev/null") == 0);
  CHECK(run_cmd(bin + " --input " + dir.path + "/g.gemp --seed 1 --out " + snap_out +
                " > /dev/null") == 0);
  auto slurp = [](const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
  };
  CHECK(slurp(out) == slurp(snap_out));
}

TEST_SUITE_END();
