#include "amoebakit/error.hpp"
