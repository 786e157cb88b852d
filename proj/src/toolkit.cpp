#include "dill/formula.hpp"
