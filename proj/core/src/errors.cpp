#include "pearlforge/errors.hpp"
