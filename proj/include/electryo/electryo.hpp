#pragma once

#include "electryo/election/scenario.hpp"
