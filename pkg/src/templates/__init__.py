# Templates
