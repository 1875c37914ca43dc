#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include "test_util.hpp"
TEST_CASE("placeholder") { CHECK(true); }
