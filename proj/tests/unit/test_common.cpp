#include <doctest.h>

#include "adscreen/common/error.hpp"
#include "adscreen/common/io.hpp"
#include "adscreen/common/rng.hpp"
#include "adscreen/common/time.hpp"
#include "adscreen/common/types.hpp"

#include <set>

using namespace adscreen;

TEST_CASE("rfc3339 parsing and formatting") {
    const auto ts = parse_rfc3339("2015-03-01T12:34:56Z");
    CHECK(format_rfc3339(ts) == "2015-03-01T12:34:56Z");
    CHECK(parse_rfc3339("2015-03-01T14:34:56+02:00") == ts);
    CHECK(parse_rfc3339("2015-03-01T07:04:56-05:30") == ts);
    CHECK(parse_rfc3339("2015-03-01T12:34:56.987Z") == ts);
    CHECK_THROWS_AS(parse_rfc3339("2015-03-01 12:34:56"), ParseError);
    CHECK_THROWS_AS(parse_rfc3339("2015-02-30T00:00:00Z"), ParseError);
    CHECK_THROWS_AS(parse_rfc3339("2015-03-01T12:34:56"), ParseError);
    CHECK(format_date(day_of(ts)) == "2015-03-01");
    CHECK(parse_date("2016-02-29") == day_of(parse_rfc3339("2016-02-29T23:59:59Z")));
    CHECK_THROWS_AS(parse_date("2015-02-29"), ParseError);
}

TEST_CASE("csv splitting") {
    CHECK(split_csv_line("a,b,,c") == std::vector<std::string>{"a", "b", "", "c"});
    CHECK(split_csv_line(R"("x,y","say ""hi""",z)") == std::vector<std::string>{"x,y", R"(say "hi")", "z"});
    CHECK_THROWS_AS(split_csv_line(R"(a,"open)"), ParseError);
}

TEST_CASE("small helpers") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(hex64(255) == "00000000000000ff");
    CHECK(format_double(0.1) == "0.1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(trim("  x y \t") == "x y");
}

TEST_CASE("enum string round trips") {
    for (auto c : all_cancer_types) CHECK(parse_cancer_type(to_string(c)) == c);
    CHECK(to_string(Scs::high) == "HIGH");
    CHECK(parse_scs("LOW") == Scs::low);
    CHECK_FALSE(parse_sex("other").has_value());
}

TEST_CASE("derived seeds are distinct and stable") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 100; ++s) seen.insert(derive_seed(42, s));
    CHECK(seen.size() == 100);
    CHECK(derive_seed(42, 7) == derive_seed(42, 7));
    CHECK(derive_seed(42, 7, 1) != derive_seed(42, 7, 2));
}

TEST_CASE("atomic write replaces the file") {
    const auto path = std::filesystem::temp_directory_path() / "adscreen-common-atomic.txt";
    write_file_atomic(path, "one");
    write_file_atomic(path, "two");
    CHECK(read_file(path) == "two");
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_file(path), IoError);
}
