# Transforms package
