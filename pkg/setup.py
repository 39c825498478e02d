from setuptools import setup

setup(
	name='korovkit',
	version='0.1',
	packages=[
		'korovkit',
		'korovkit.modules',
		'korovkit.modules.families',
	],
	install_requires=[
		'numpy',
		'scipy>=1.9',
		'lark>=1.1'
	],
	extras_require={
		'test': ['pytest', 'hypothesis']
	},
	entry_points={
		'console_scripts': [
			'korovkit=korovkit.cli:main'
		]
	}
)
