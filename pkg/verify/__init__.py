# Verify package
