# Test module for Irregular Turbo Lab
